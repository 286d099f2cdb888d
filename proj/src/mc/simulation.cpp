#include "swing/mc/simulation.hpp"

#include "swing/error.hpp"
#include "swing/mc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace swing::mc {

namespace {

long day_index(double t) {
    const double d = t * market::kDaysPerYear;
    const double r = std::round(d);
    if (std::abs(d - r) > 1e-6) throw Error(ErrorCode::InvalidArgument, "schedule date off the daily grid");
    return static_cast<long>(r);
}

} // namespace

void SimulationSchedule::validate() const {
    require(!fixing_times.empty(), "schedule: no fixing dates");
    require(level >= 0 && rng_level >= level && rng_level <= 10, "schedule: need 0 <= level <= rng_level <= 10");
    const auto obs = observation_times();
    require(obs.front() > 0.0, "schedule: dates must follow the valuation date");
    for (std::size_t i = 1; i < obs.size(); ++i) require(obs[i] > obs[i - 1], "schedule: dates must increase");
    for (double t : obs) day_index(t);
}

std::vector<double> SimulationSchedule::observation_times() const {
    std::vector<double> out = strike_times;
    out.insert(out.end(), fixing_times.begin(), fixing_times.end());
    return out;
}

PathSet simulate_spot(const lv::ModelParams& params, const SimulationSchedule& schedule, std::size_t n_paths,
                      std::uint64_t seed, numerics::Domain domain, std::size_t first_path, int threads,
                      const std::optional<spike::SpikeParams>& spikes) {
    schedule.validate();
    params.validate();
    require(n_paths >= 1, "simulate_spot: need at least one path");

    PathSet out;
    out.seed = seed;
    out.domain = domain;
    out.first_path = first_path;
    out.n_paths = n_paths;
    out.times = schedule.observation_times();
    const std::size_t n_obs = out.times.size();
    out.values.assign(n_paths * n_obs, 0.0);

    const long last_day = day_index(out.times.back());
    const int fine_per_day = 1 << schedule.rng_level;
    const int steps_per_day = 1 << schedule.level;
    const int group = fine_per_day / steps_per_day;
    const double dt = market::kOneDay / steps_per_day;
    const double sqrt_dt = std::sqrt(dt);
    const double group_scale = 1.0 / std::sqrt(static_cast<double>(group));
    const long n_steps = last_day * steps_per_day;

    // Local-vol row and observation slot per step, shared by all paths.
    std::vector<std::size_t> row(static_cast<std::size_t>(n_steps));
    for (long n = 0; n < n_steps; ++n) row[static_cast<std::size_t>(n)] = params.localvol.slice_index((n + 0.5) * dt);
    std::vector<long> obs_step(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) obs_step[i] = day_index(out.times[i]) * steps_per_day;

    const double a = params.a;
    std::vector<std::uint64_t> hits(n_paths, 0);
    parallel_for(n_paths, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            numerics::CounterRng rng(seed, domain, numerics::Stream::Diffusion, static_cast<std::uint32_t>(first_path + p));
            double s = 1.0;
            std::size_t next_obs = 0;
            double* dst = out.values.data() + p * n_obs;
            for (long n = 0; n < n_steps; ++n) {
                double z = 0.0;
                for (int g = 0; g < group; ++g) z += rng.normal();
                z *= group_scale;
                const double eta = params.localvol.slice_value(row[static_cast<std::size_t>(n)], s);
                s += a * (1.0 - s) * dt + eta * s * sqrt_dt * z;
                if (!(s >= kSpotFloor)) {
                    s = kSpotFloor;
                    ++hits[p];
                }
                while (next_obs < n_obs && obs_step[next_obs] == n + 1) dst[next_obs++] = s;
            }
        }
    });
    for (auto h : hits) out.floor_hits += h;
    out.steps = static_cast<std::uint64_t>(n_steps) * n_paths;

    if (spikes && spikes->intensity > 0.0) {
        out.spikes.assign(n_paths * n_obs, 0.0);
        parallel_for(n_paths, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                const auto path = spike::simulate_spike_path(*spikes, out.times.back(), seed,
                                                             static_cast<std::uint32_t>(first_path + p), domain);
                for (std::size_t i = 0; i < n_obs; ++i) out.spikes[p * n_obs + i] = path(out.times[i]);
            }
        });
    } else if (spikes) {
        out.spikes.assign(n_paths * n_obs, 0.0);
    }
    return out;
}

AffineMap day_ahead_map(const lv::ModelParams& params, const market::InitialCurve& curve,
                        const SimulationSchedule& schedule) {
    const market::DeliveryPeriod day{};
    const lv::DeliveryRemap remap(curve, params.a, day);
    AffineMap m;
    for (double t : schedule.fixing_times) {
        const double T = t + market::kOneDay;
        const double F0 = market::period_futures(curve, T, day);
        const double at0 = lv::period_futures_closed_form(0.0, t, T, remap, F0);
        const double at1 = lv::period_futures_closed_form(1.0, t, T, remap, F0);
        m.alpha.push_back(at0);
        m.beta.push_back(at1 - at0);
    }
    return m;
}

std::vector<double> day_ahead_forwards(const market::InitialCurve& curve, const SimulationSchedule& schedule) {
    std::vector<double> out;
    for (double t : schedule.fixing_times) out.push_back(market::period_futures(curve, t + market::kOneDay, {}));
    return out;
}

FixingSet day_ahead_fixings(const PathSet& paths, const lv::ModelParams& params, const market::InitialCurve& curve,
                            const SimulationSchedule& schedule) {
    const auto map = day_ahead_map(params, curve, schedule);
    const std::size_t nf = schedule.n_fixings();
    const std::size_t offset = schedule.strike_times.size();
    require(paths.times.size() == offset + nf, "day_ahead_fixings: path set does not match the schedule");
    FixingSet out;
    out.n_paths = paths.n_paths;
    out.n_fixings = nf;
    out.fixings.resize(paths.n_paths * nf);
    for (std::size_t p = 0; p < paths.n_paths; ++p)
        for (std::size_t i = 0; i < nf; ++i) out.fixings[p * nf + i] = map.alpha[i] + map.beta[i] * paths.s(p, offset + i);
    return out;
}

AffineMap strike_window_map(const lv::ModelParams& params, const market::InitialCurve& curve,
                            const SimulationSchedule& schedule, const MonthContract& month) {
    const lv::DeliveryRemap remap(curve, params.a, month.delivery);
    const double F0 = market::period_futures(curve, month.maturity, month.delivery);
    AffineMap m;
    for (double t : schedule.strike_times) {
        require(t <= month.maturity, "strike window date after the month contract maturity");
        const double at0 = lv::period_futures_closed_form(0.0, t, month.maturity, remap, F0);
        const double at1 = lv::period_futures_closed_form(1.0, t, month.maturity, remap, F0);
        m.alpha.push_back(at0);
        m.beta.push_back(at1 - at0);
    }
    return m;
}

std::vector<double> floating_strikes(const PathSet& paths, const lv::ModelParams& params,
                                     const market::InitialCurve& curve, const SimulationSchedule& schedule,
                                     const MonthContract& month) {
    const std::size_t ns = schedule.strike_times.size();
    require(ns > 0, "floating_strikes: no strike window");
    const auto map = strike_window_map(params, curve, schedule, month);
    std::vector<double> out(paths.n_paths);
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
        double sum = 0.0;
        for (std::size_t j = 0; j < ns; ++j) sum += map.alpha[j] + map.beta[j] * paths.s(p, j);
        out[p] = sum / static_cast<double>(ns);
    }
    return out;
}

void write_fixings_csv(const std::string& path, const FixingSet& fixings, const SimulationSchedule& schedule,
                       const market::Date& valuation_date, std::size_t max_paths) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "path,date,fixing\n";
    char buf[64];
    for (std::size_t p = 0; p < std::min(max_paths, fixings.n_paths); ++p)
        for (std::size_t i = 0; i < fixings.n_fixings; ++i) {
            const int day = static_cast<int>(std::lround(schedule.fixing_times[i] * market::kDaysPerYear));
            std::snprintf(buf, sizeof buf, ",%.12g\n", fixings.F(p, i));
            out << p << ',' << market::format_iso_date(market::add_days(valuation_date, day)) << buf;
        }
}

} // namespace swing::mc
