#pragma once

#include "swing/lv/model.hpp"
#include "swing/market/curve.hpp"
#include "swing/market/quotes.hpp"

#include <functional>
#include <string>
#include <vector>

namespace swing::pde {

/// Uniform grid on [0, k_max] with `nodes` points and time step `dt`.
struct PdeGrid {
    double k_max = 4.0;
    int nodes = 801;
    double dt = market::kOneDay;

    double dk() const noexcept { return k_max / (nodes - 1); }
    void validate() const;
};

struct SolveDiagnostics {
    double max_bound_violation = 0.0;     // worst breach of (1-k)^+ <= c <= 1
    double max_convexity_violation = 0.0; // worst negative second difference
    int upwind_nodes = 0;                 // node-steps using one-sided differences
};

/// c(t_n, k_j) on the solve grid. Monotone cubic in k, linear in t; for
/// k <= 0 the exact value 1 - k is returned.
class NormalizedCallSurface {
public:
    NormalizedCallSurface(PdeGrid grid, std::vector<double> times, std::vector<double> values, SolveDiagnostics diag);

    double operator()(double t, double k) const;
    std::span<const double> slice(std::size_t n) const;

    const PdeGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& times() const noexcept { return times_; }
    double horizon() const noexcept { return times_.back(); }
    const SolveDiagnostics& diagnostics() const noexcept { return diag_; }

    /// Writes `t,k,c` rows for every `t_stride`-th slice and `k_stride`-th node.
    void save_csv(const std::string& path, int t_stride = 1, int k_stride = 1) const;

private:
    double slice_value(std::size_t n, double k) const;

    PdeGrid grid_;
    std::vector<double> times_;
    std::vector<double> values_;
    SolveDiagnostics diag_;
};

/// Coefficients of dc/dt = -A(t) c - A(t)(1 - k) dc/dk + 0.5 k^2 vol(t, k)^2 d2c/dk2.
struct DupireCoefficients {
    std::function<double(double t)> mean_reversion;
    std::function<double(double t, double k)> vol;
};

/// Fully implicit solve from c(0, k) = (1 - k)^+ with c(t, 0) = 1 and
/// c(t, k_max) = 0. Convection uses central differences unless the cell
/// Peclet number exceeds 2, then one-sided differences in the upwind
/// direction. Coefficients are evaluated at the middle of each step.
NormalizedCallSurface solve_dupire(const lv::ModelParams& params, double horizon, const PdeGrid& grid = {});
NormalizedCallSurface solve_dupire(const DupireCoefficients& coeffs, double horizon, const PdeGrid& grid = {});

/// df F_0 G e^{-a (T - t)} c(t, k) with k = 1 - (1 - K / F_0) e^{a (T - t)} / G.
/// `period_weight` is G(T, delta) for a delivery period (1 for instantaneous
/// futures). Throws MappedStrikeOutOfGrid when k >= k_max.
double option_on_futures(const NormalizedCallSurface& surface, const lv::ModelParams& params, double t_expiry,
                         double T_futures, double K, double F0T, double df, double period_weight = 1.0);

/// Black-76 implied vol of the model price of a quote.
double model_iv(const NormalizedCallSurface& surface, const lv::ModelParams& params, const market::VanillaQuote& quote,
                const market::InitialCurve& curve, const market::DiscountCurve& dcurve);

/// ATM implied vol of an option on F(T, dp) expiring at `expiry`.
double atm_iv(const NormalizedCallSurface& surface, const lv::ModelParams& params, double expiry, double T,
              const market::DeliveryPeriod& dp, const market::InitialCurve& curve, const market::DiscountCurve& dcurve);

/// PVO implied vol of the back futures minus the MCO implied vol of the same
/// futures expiring at the front last trading date, both at the money.
double vol_drop(const NormalizedCallSurface& surface, const lv::ModelParams& params, double front_ltd,
                double back_maturity, const market::DeliveryPeriod& dp, const market::InitialCurve& curve,
                const market::DiscountCurve& dcurve);

} // namespace swing::pde
