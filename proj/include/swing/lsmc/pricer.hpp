#pragma once

#include "swing/lsmc/contract.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace swing::lsmc {

inline constexpr double kConditionLimit = 1e12;

/// Quadratic basis in F, extended by K and F K for floating strikes.
/// Regressors are standardized per date, which leaves the spanned space
/// unchanged.
struct RegressionBasis {
    bool floating = false;
    double f_mean = 0.0, f_scale = 1.0;
    double k_mean = 0.0, k_scale = 1.0;

    int size() const noexcept { return floating ? 6 : 3; }
    void eval(double F, double K, double* out) const;
};

/// Continuation estimates: beta[i][j] fits the value after date i at node j
/// of C^i, as a function of the date-i basis. Dates 1..n_f-1 carry fits.
struct RegressionCoeffs {
    std::vector<RegressionBasis> basis;
    std::vector<std::vector<std::array<double, 6>>> beta;
    std::vector<bool> fallback;      // sample-mean continuation used
    double in_sample_value = 0.0;    // mean backward value at date 0

    double continuation(int i, std::size_t j, double F, double K) const;
};

struct PricingResult {
    double price = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::vector<double> consumption_profile; // mean volume per fixing date
    double bang_bang_fraction = 0.0;
    // both phases use one seed on distinct Philox domains
    std::uint64_t regression_seed = 0;
    std::uint64_t pricing_seed = 0;
};

/// Payment discount factors per fixing date: P(0, T_i + pay_lag).
std::vector<double> payment_discounts(const SwingContract& contract, const market::DiscountCurve& dcurve);

RegressionCoeffs backward_regression(const mc::FixingSet& fixings, const ConsumptionGrid& grid,
                                     const SwingContract& contract, const std::vector<double>& pay_df, int threads = 1);

/// Greedy walk under the fitted continuation; ties go to the larger volume.
/// Throws InfeasibleState if a plan breaks a constraint.
PricingResult forward_price(const RegressionCoeffs& coeffs, const mc::FixingSet& fixings, const ConsumptionGrid& grid,
                            const SwingContract& contract, const std::vector<double>& pay_df, int threads = 1);

struct LsmcConfig {
    std::size_t regression_paths = 100000;
    std::size_t pricing_paths = 1000000;
    std::size_t chunk_paths = 100000;
    int threads = 1;
};

/// Regression on the Regression domain, repricing on fresh Pricing paths.
PricingResult price_swing(const SwingContract& contract, const lv::ModelParams& params,
                          const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                          const LsmcConfig& config, std::uint64_t seed,
                          const std::optional<spike::SpikeParams>& spikes = std::nullopt);

} // namespace swing::lsmc
