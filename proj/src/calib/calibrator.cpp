#include "swing/calib/calibrator.hpp"

#include "swing/calib/anderson.hpp"
#include "swing/error.hpp"
#include "swing/market/black76.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swing::calib {

QuoteBook::QuoteBook(const std::vector<market::VanillaQuote>& quotes, double a, const market::InitialCurve& curve,
                     const market::DiscountCurve& dcurve)
    : quotes_(quotes), a_(a) {
    for (const auto& q : quotes_) {
        q.validate();
        F0_.push_back(market::period_futures(curve, q.futures_maturity, q.delivery));
        G_.push_back(lv::DeliveryRemap(curve, a, q.delivery).G(q.futures_maturity));
        df_.push_back(dcurve.discount(q.option_expiry));
    }
}

std::vector<double> QuoteBook::model_ivs(const pde::NormalizedCallSurface& surface, const lv::ModelParams& params) const {
    std::vector<double> out(quotes_.size());
    for (std::size_t i = 0; i < quotes_.size(); ++i) {
        const auto& q = quotes_[i];
        const double price =
            pde::option_on_futures(surface, params, q.option_expiry, q.futures_maturity, q.strike, F0_[i], df_[i], G_[i]);
        out[i] = market::implied_vol(price, F0_[i], q.strike, q.option_expiry, df_[i]);
    }
    return out;
}

double QuoteBook::remapped_strike(std::size_t i) const {
    const auto& q = quotes_[i];
    return 1.0 - (1.0 - q.strike / F0_[i]) * std::exp(a_ * (q.futures_maturity - q.option_expiry)) / G_[i];
}

double QuoteBook::horizon() const {
    double h = 0.0;
    for (const auto& q : quotes_) h = std::max(h, q.option_expiry);
    return h;
}

namespace {

std::vector<double> sorted_unique(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

double max_abs(const std::vector<double>& model, const std::vector<market::VanillaQuote>& quotes) {
    double e = 0.0;
    for (std::size_t i = 0; i < quotes.size(); ++i) e = std::max(e, std::abs(model[i] - quotes[i].implied_vol));
    return e;
}

} // namespace

LocalVolFit calibrate_local_vol(const std::vector<market::VanillaQuote>& pvo, double a,
                                const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                                const pde::PdeGrid& grid, const FixedPointConfig& cfg) {
    require(!pvo.empty(), "calibrate_local_vol: no quotes");
    require(a >= 0.0, "calibrate_local_vol: negative mean reversion");
    const QuoteBook book(pvo, a, curve, dcurve);
    const std::size_t nq = pvo.size();

    std::vector<double> expiries, strikes(nq);
    for (std::size_t i = 0; i < nq; ++i) {
        expiries.push_back(pvo[i].option_expiry);
        strikes[i] = book.remapped_strike(i);
        if (!(strikes[i] > 0.0 && strikes[i] < grid.k_max))
            throw Error(ErrorCode::MappedStrikeOutOfGrid, "quote strike maps outside (0, k_max)");
    }
    const auto t_knots = sorted_unique(expiries, 1e-9);
    const auto k_knots = sorted_unique(strikes, 1e-9);
    const std::size_t nt = t_knots.size(), nk = k_knots.size();

    // For each knot, the nearest quote (in k) within its expiry row.
    std::vector<std::size_t> driver(nt * nk);
    std::vector<double> x0(nt * nk);
    for (std::size_t r = 0; r < nt; ++r) {
        for (std::size_t c = 0; c < nk; ++c) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = nq;
            for (std::size_t i = 0; i < nq; ++i) {
                if (std::abs(pvo[i].option_expiry - t_knots[r]) > 1e-9) continue;
                const double d = std::abs(strikes[i] - k_knots[c]);
                if (d < best) {
                    best = d;
                    arg = i;
                }
            }
            driver[r * nk + c] = arg;
            // Start from the quoted vol, scaled so that the ATM futures vol
            // eta e^{-a (T - u)} G averages to it over the expiry.
            const auto& q = pvo[arg];
            const double T = q.option_expiry;
            const double lift = a > 0.0 ? std::sqrt(2.0 * a * T / -std::expm1(-2.0 * a * T)) : 1.0;
            x0[r * nk + c] = q.implied_vol * lift / lv::DeliveryRemap(curve, a, q.delivery).G(q.futures_maturity);
        }
    }

    LocalVolFit fit{lv::LocalVolSurface(t_knots, k_knots, x0), {}};
    CalibrationReport& report = fit.report;
    AndersonMixer mixer(cfg.memory, cfg.ridge);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(fit.surface.values().data(), static_cast<Eigen::Index>(nt * nk));
    const double horizon = book.horizon();

    std::vector<double> ivs;
    double best_err = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = x;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const lv::LocalVolSurface surface = fit.surface.with_values(std::vector<double>(x.data(), x.data() + x.size()));
        const lv::ModelParams params{a, surface};
        const auto pde_surface = pde::solve_dupire(params, horizon, grid);
        ivs = book.model_ivs(pde_surface, params);
        const double err = max_abs(ivs, pvo);
        report.error_history_bp.push_back(err * 1e4);
        report.iterations = it;
        if (err < best_err) {
            best_err = err;
            best_x = x;
        }
        if (err <= cfg.tol) {
            report.converged = true;
            break;
        }
        Eigen::VectorXd gx(x.size());
        for (std::size_t j = 0; j < nt * nk; ++j) {
            const std::size_t q = driver[j];
            gx[static_cast<Eigen::Index>(j)] =
                std::clamp(x[static_cast<Eigen::Index>(j)] * pvo[q].implied_vol / ivs[q], lv::kVolFloor, lv::kVolCap);
        }
        // Mixing acts on log-vols, where the multiplicative update is additive.
        x = cfg.anderson ? Eigen::VectorXd(mixer.step(x.array().log().matrix(), gx.array().log().matrix()).array().exp())
                         : gx;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            if (!std::isfinite(x[j])) {
                mixer.reset();
                x = gx;
                break;
            }
            x[j] = std::clamp(x[j], lv::kVolFloor, lv::kVolCap);
        }
    }
    if (!report.converged) x = best_x;
    fit.surface = fit.surface.with_values(std::vector<double>(x.data(), x.data() + x.size()));

    // Final errors from the returned surface, not from the loop.
    const lv::ModelParams params{a, fit.surface};
    const auto pde_surface = pde::solve_dupire(params, horizon, grid);
    ivs = book.model_ivs(pde_surface, params);
    report.per_quote_error_bp.resize(nq);
    for (std::size_t i = 0; i < nq; ++i) report.per_quote_error_bp[i] = (ivs[i] - pvo[i].implied_vol) * 1e4;
    report.max_abs_iv_error_bp = max_abs(ivs, pvo) * 1e4;
    report.converged = report.max_abs_iv_error_bp <= cfg.tol * 1e4 * (1.0 + 1e-9);
    return fit;
}

std::vector<double> default_a_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 8; ++i) g.push_back(0.25 * i);
    return g;
}

double secondary_rmse(const CalibrationTarget& target, const lv::ModelParams& params,
                      const pde::NormalizedCallSurface& surface, const market::InitialCurve& curve,
                      const market::DiscountCurve& dcurve) {
    double sum = 0.0, weight = 0.0;
    for (const auto& q : target.mco) {
        const double e = pde::model_iv(surface, params, q, curve, dcurve) - q.implied_vol;
        sum += target.mco_weight * e * e;
        weight += target.mco_weight;
    }
    for (const auto& d : target.vol_drops) {
        const double e = pde::vol_drop(surface, params, d.front_ltd, d.back_maturity, d.delivery, curve, dcurve) - d.value;
        sum += target.vol_drop_weight * e * e;
        weight += target.vol_drop_weight;
    }
    return weight > 0.0 ? std::sqrt(sum / weight) : 0.0;
}

namespace {

struct Candidate {
    double a;
    double objective;
    bool ok;
    LocalVolFit fit;
};

Candidate evaluate(double a, const CalibrationTarget& target, const market::InitialCurve& curve,
                   const market::DiscountCurve& dcurve, const pde::PdeGrid& grid, const FixedPointConfig& cfg) {
    try {
        auto fit = calibrate_local_vol(target.pvo, a, curve, dcurve, grid, cfg);
        if (!fit.report.converged) return {a, std::numeric_limits<double>::infinity(), false, std::move(fit)};
        double horizon = 0.0;
        for (const auto& q : target.pvo) horizon = std::max(horizon, q.option_expiry);
        for (const auto& q : target.mco) horizon = std::max(horizon, q.option_expiry);
        for (const auto& d : target.vol_drops) horizon = std::max(horizon, d.back_maturity);
        const lv::ModelParams params{a, fit.surface};
        const auto surface = pde::solve_dupire(params, horizon, grid);
        const double obj = secondary_rmse(target, params, surface, curve, dcurve);
        fit.report.secondary_rmse = obj;
        return {a, obj, true, std::move(fit)};
    } catch (const Error&) {
        return {a, std::numeric_limits<double>::infinity(), false, {}};
    }
}

} // namespace

MeanReversionFit calibrate_mean_reversion(const CalibrationTarget& target, const market::InitialCurve& curve,
                                          const market::DiscountCurve& dcurve, const pde::PdeGrid& grid,
                                          const FixedPointConfig& cfg, std::vector<double> a_grid, double tie_tol) {
    require(!target.pvo.empty(), "calibrate_mean_reversion: no PVO quotes");
    require(!a_grid.empty(), "calibrate_mean_reversion: empty a grid");
    std::sort(a_grid.begin(), a_grid.end());
    a_grid.erase(std::unique(a_grid.begin(), a_grid.end()), a_grid.end());
    const bool has_secondary = !target.mco.empty() || !target.vol_drops.empty();
    require(has_secondary || a_grid.size() == 1, "calibrate_mean_reversion: secondary targets required");

    std::vector<std::pair<double, double>> path;
    std::vector<Candidate> grid_results;
    for (double a : a_grid) {
        grid_results.push_back(evaluate(a, target, curve, dcurve, grid, cfg));
        path.emplace_back(a, grid_results.back().objective);
    }
    double min_obj = std::numeric_limits<double>::infinity();
    for (const auto& c : grid_results)
        if (c.ok) min_obj = std::min(min_obj, c.objective);
    if (!std::isfinite(min_obj)) throw Error(ErrorCode::NoConvergence, "no mean-reversion candidate calibrated");
    std::size_t best = 0;
    while (!(grid_results[best].ok && grid_results[best].objective <= min_obj + tie_tol)) ++best;

    Candidate champion = std::move(grid_results[best]);
    if (a_grid.size() > 1) {
        const double lo = a_grid[best == 0 ? 0 : best - 1];
        const double hi = a_grid[std::min(best + 1, a_grid.size() - 1)];
        auto neighbour_flat = [&](std::size_t i) {
            return i < grid_results.size() && i != best && grid_results[i].ok &&
                   std::abs(grid_results[i].objective - champion.objective) <= tie_tol;
        };
        const bool flat = neighbour_flat(best + 1) || (best > 0 && neighbour_flat(best - 1));
        if (!flat && hi > lo) {
            constexpr double invphi = 0.6180339887498949;
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            Candidate c1 = evaluate(x1, target, curve, dcurve, grid, cfg);
            Candidate c2 = evaluate(x2, target, curve, dcurve, grid, cfg);
            path.emplace_back(x1, c1.objective);
            path.emplace_back(x2, c2.objective);
            double a_lo = lo, a_hi = hi;
            for (int it = 0; it < 12 && a_hi - a_lo > 1e-3; ++it) {
                if (c1.objective <= c2.objective) {
                    a_hi = x2;
                    x2 = x1;
                    c2 = std::move(c1);
                    x1 = a_hi - invphi * (a_hi - a_lo);
                    c1 = evaluate(x1, target, curve, dcurve, grid, cfg);
                    path.emplace_back(x1, c1.objective);
                } else {
                    a_lo = x1;
                    x1 = x2;
                    c1 = std::move(c2);
                    x2 = a_lo + invphi * (a_hi - a_lo);
                    c2 = evaluate(x2, target, curve, dcurve, grid, cfg);
                    path.emplace_back(x2, c2.objective);
                }
            }
            for (Candidate* c : {&c1, &c2})
                if (c->ok && c->objective < champion.objective - tie_tol) champion = std::move(*c);
        }
    }

    MeanReversionFit out;
    out.a = champion.a;
    out.params = {champion.a, champion.fit.surface};
    out.report = std::move(champion.fit.report);
    out.report.a_path = std::move(path);
    out.report.secondary_rmse = champion.objective;
    return out;
}

std::vector<market::VanillaQuote> model_quotes(const lv::ModelParams& params, std::vector<market::VanillaQuote> templates,
                                               const market::InitialCurve& curve, const market::DiscountCurve& dcurve,
                                               const pde::PdeGrid& grid) {
    double horizon = 0.0;
    for (const auto& q : templates) horizon = std::max(horizon, q.option_expiry);
    const auto surface = pde::solve_dupire(params, horizon, grid);
    for (auto& q : templates) q.implied_vol = pde::model_iv(surface, params, q, curve, dcurve);
    return templates;
}

} // namespace swing::calib
