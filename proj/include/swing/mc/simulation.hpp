#pragma once

#include "swing/lv/model.hpp"
#include "swing/market/curve.hpp"
#include "swing/numerics/philox.hpp"
#include "swing/spike/spike.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace swing::mc {

/// Observation dates of a simulation: optional strike-window dates followed
/// by the fixing dates. Every date must sit on the daily grid.
struct SimulationSchedule {
    std::vector<double> fixing_times;
    std::vector<double> strike_times;
    /// Euler steps per day are 2^level; normals are drawn at 2^rng_level per
    /// day and summed in groups, so runs at different levels share one
    /// Brownian path when rng_level is the same.
    int level = 0;
    int rng_level = 0;

    void validate() const;
    std::vector<double> observation_times() const;
    std::size_t n_fixings() const noexcept { return fixing_times.size(); }
};

/// s at every observation date for paths [first_path, first_path + n_paths).
struct PathSet {
    std::uint64_t seed = 0;
    numerics::Domain domain = numerics::Domain::Pricing;
    std::size_t first_path = 0;
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<double> values; // path-major
    std::vector<double> spikes; // y at the same dates when simulated, else empty
    std::uint64_t floor_hits = 0;
    std::uint64_t steps = 0;

    double s(std::size_t path, std::size_t obs) const { return values[path * times.size() + obs]; }
    double y(std::size_t path, std::size_t obs) const { return spikes.empty() ? 0.0 : spikes[path * times.size() + obs]; }
    double floor_frequency() const { return steps ? static_cast<double>(floor_hits) / static_cast<double>(steps) : 0.0; }
};

inline constexpr double kSpotFloor = 1e-8;

/// Euler on s: s += a (1 - s) dt + eta(t, s) s sqrt(dt) Z, floored at
/// kSpotFloor, from s_0 = 1. Path p uses the diffusion substream
/// (seed, domain, p), so any chunking or thread count gives the same values.
PathSet simulate_spot(const lv::ModelParams& params, const SimulationSchedule& schedule, std::size_t n_paths,
                      std::uint64_t seed, numerics::Domain domain = numerics::Domain::Pricing,
                      std::size_t first_path = 0, int threads = 1,
                      const std::optional<spike::SpikeParams>& spikes = std::nullopt);

/// F_{T_i}(T_i + 1d, 1d) per path and fixing date, path-major.
struct FixingSet {
    std::size_t n_paths = 0;
    std::size_t n_fixings = 0;
    std::vector<double> fixings;
    std::vector<double> strikes; // per path, floating strike only

    double F(std::size_t path, std::size_t i) const { return fixings[path * n_fixings + i]; }
};

/// The day-ahead futures is affine in s at each fixing: F = alpha + beta s.
struct AffineMap {
    std::vector<double> alpha, beta;
};

AffineMap day_ahead_map(const lv::ModelParams& params, const market::InitialCurve& curve,
                        const SimulationSchedule& schedule);
/// Today's day-ahead forwards F_0(T_i + 1d, 1d).
std::vector<double> day_ahead_forwards(const market::InitialCurve& curve, const SimulationSchedule& schedule);

FixingSet day_ahead_fixings(const PathSet& paths, const lv::ModelParams& params, const market::InitialCurve& curve,
                            const SimulationSchedule& schedule);

/// The futures whose average sets a floating strike.
struct MonthContract {
    double maturity;
    market::DeliveryPeriod delivery;
};

AffineMap strike_window_map(const lv::ModelParams& params, const market::InitialCurve& curve,
                            const SimulationSchedule& schedule, const MonthContract& month);

/// Per-path mean over the strike window of F_{t_j}(month).
std::vector<double> floating_strikes(const PathSet& paths, const lv::ModelParams& params,
                                     const market::InitialCurve& curve, const SimulationSchedule& schedule,
                                     const MonthContract& month);

/// Rows `path,date,fixing` with ISO dates.
void write_fixings_csv(const std::string& path, const FixingSet& fixings, const SimulationSchedule& schedule,
                       const market::Date& valuation_date, std::size_t max_paths);

} // namespace swing::mc
