#pragma once

#include "swing/lv/model.hpp"
#include "swing/market/curve.hpp"
#include "swing/market/quotes.hpp"
#include "swing/pde/dupire.hpp"

#include <vector>

namespace swing::calib {

struct FixedPointConfig {
    double tol = 1e-5; // 0.1 bp in vol
    int max_iterations = 50;
    bool anderson = true;
    int memory = 5;
    double ridge = 1e-10;
};

struct VolDropTarget {
    double front_ltd;
    double back_maturity;
    market::DeliveryPeriod delivery;
    double value;
};

struct CalibrationTarget {
    std::vector<market::VanillaQuote> pvo;
    std::vector<market::VanillaQuote> mco;
    std::vector<VolDropTarget> vol_drops;
    double mco_weight = 1.0;
    double vol_drop_weight = 1.0;
};

struct CalibrationReport {
    int iterations = 0;
    bool converged = false;
    double max_abs_iv_error_bp = 0.0;
    std::vector<double> per_quote_error_bp; // model minus market, final surface
    std::vector<double> error_history_bp;   // max error after each PDE solve
    std::vector<std::pair<double, double>> a_path; // (a, secondary RMSE)
    double secondary_rmse = 0.0;
};

struct LocalVolFit {
    lv::LocalVolSurface surface;
    CalibrationReport report;
};

/// Per-quote constants for a given mean reversion: F_0(T, delta),
/// G(T, delta) and the discount factor to expiry.
class QuoteBook {
public:
    QuoteBook(const std::vector<market::VanillaQuote>& quotes, double a, const market::InitialCurve& curve,
              const market::DiscountCurve& dcurve);

    std::vector<double> model_ivs(const pde::NormalizedCallSurface& surface, const lv::ModelParams& params) const;
    /// Normalized strike of quote q at its expiry.
    double remapped_strike(std::size_t q) const;
    double horizon() const;
    const std::vector<market::VanillaQuote>& quotes() const noexcept { return quotes_; }

private:
    std::vector<market::VanillaQuote> quotes_;
    double a_;
    std::vector<double> F0_, G_, df_;
};

/// Fits eta so that every PVO reprices to its market vol. One time knot per
/// expiry, one k knot per distinct remapped strike; each knot is multiplied
/// by the market/model vol ratio of the nearest quote of its expiry, the
/// update being wrapped in Anderson mixing.
LocalVolFit calibrate_local_vol(const std::vector<market::VanillaQuote>& pvo, double a,
                                const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                                const pde::PdeGrid& grid = {}, const FixedPointConfig& cfg = {});

struct MeanReversionFit {
    double a = 0.0;
    lv::ModelParams params;
    CalibrationReport report;
};

/// Default outer grid {0, 0.25, ..., 2}.
std::vector<double> default_a_grid();

/// Vol-space RMSE of the secondary targets under a calibrated model.
double secondary_rmse(const CalibrationTarget& target, const lv::ModelParams& params,
                      const pde::NormalizedCallSurface& surface, const market::InitialCurve& curve,
                      const market::DiscountCurve& dcurve);

/// Grid search over a followed by golden-section refinement around the best
/// grid point. Candidates whose inner calibration fails are skipped. Any
/// candidate within `tie_tol` of the best objective counts as a tie and the
/// smallest such a wins; the default equals the PVO fit tolerance, below
/// which secondary differences carry no information.
MeanReversionFit calibrate_mean_reversion(const CalibrationTarget& target, const market::InitialCurve& curve,
                                          const market::DiscountCurve& dcurve, const pde::PdeGrid& grid = {},
                                          const FixedPointConfig& cfg = {}, std::vector<double> a_grid = default_a_grid(),
                                          double tie_tol = 1e-5);

/// Quotes priced under a given model (PVO and MCO alike): the implied vol of
/// the model price replaces each template's implied_vol.
std::vector<market::VanillaQuote> model_quotes(const lv::ModelParams& params, std::vector<market::VanillaQuote> templates,
                                               const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                                               const pde::PdeGrid& grid = {});

} // namespace swing::calib
