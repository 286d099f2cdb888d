#include "catch_amalgamated.hpp"

#include "swing/calib/anderson.hpp"
#include "swing/calib/calibrator.hpp"
#include "swing/calib/synthetic.hpp"

#include <cmath>

using namespace swing;
using namespace swing::calib;
using swing::market::DeliveryPeriod;
using Catch::Approx;

namespace {

struct LinearMap {
    Eigen::Matrix3d B;
    Eigen::Vector3d c;
    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return c + B * x; }
};

LinearMap contraction() {
    Eigen::Matrix3d Q;
    Q << 0.6, -0.8, 0.0, 0.8, 0.6, 0.0, 0.0, 0.0, 1.0;
    LinearMap g;
    g.B = Q * Eigen::Vector3d(0.9, 0.5, -0.3).asDiagonal() * Q.transpose();
    g.c = Eigen::Vector3d(1.0, -2.0, 0.5);
    return g;
}

int iterations_to(const LinearMap& g, bool anderson, int m, double tol) {
    const Eigen::Vector3d fixed = (Eigen::Matrix3d::Identity() - g.B).inverse() * g.c;
    AndersonMixer mixer(m);
    Eigen::VectorXd x = Eigen::Vector3d::Zero();
    for (int it = 1; it <= 500; ++it) {
        const Eigen::VectorXd gx = g(x);
        x = anderson ? mixer.step(x, gx) : gx;
        if ((x - fixed).norm() < tol) return it;
    }
    return 500;
}

} // namespace

TEST_CASE("anderson accelerates a linear contraction", "[calib][anderson]") {
    const auto g = contraction();
    const int fast = iterations_to(g, true, 3, 1e-10);
    const int slow = iterations_to(g, false, 3, 1e-10);
    INFO("anderson " << fast << " plain " << slow);
    REQUIRE(fast <= 10);
    REQUIRE(slow >= 40);
}

TEST_CASE("anderson degenerate histories", "[calib][anderson]") {
    std::deque<Eigen::VectorXd> xs{Eigen::Vector2d(1.0, 2.0)}, gs{Eigen::Vector2d(3.0, 1.0)};
    REQUIRE(anderson_step(xs, gs, 5) == Eigen::VectorXd(Eigen::Vector2d(3.0, 1.0)));
    xs.push_back(Eigen::Vector2d(0.5, 0.5));
    gs.push_back(Eigen::Vector2d(0.5, 0.5));
    REQUIRE(anderson_step(xs, gs, 5) == Eigen::VectorXd(Eigen::Vector2d(0.5, 0.5)));
    // repeated identical residual differences are rank deficient
    std::deque<Eigen::VectorXd> rx, rg;
    for (int i = 0; i < 3; ++i) {
        rx.push_back(Eigen::Vector2d(i, 0.0));
        rg.push_back(Eigen::Vector2d(i + 1.0, 1.0));
    }
    const auto step = anderson_step(rx, rg, 5);
    REQUIRE(step.allFinite());
}

TEST_CASE("flat market calibrates to a flat surface", "[calib]") {
    const auto curve = synthetic_curve();
    const market::DiscountCurve dc;
    market::SynthSpec spec;
    for (const auto& f : synthetic_expiries()) spec.expiries.push_back(f.maturity);
    spec.moneyness = synthetic_moneyness();
    spec.delivery = DeliveryPeriod::from_label("1m");
    spec.smile = {0.2};
    const auto quotes = market::synth_quotes(curve, spec);
    REQUIRE(quotes.size() == 55);
    for (const auto& q : quotes) REQUIRE(q.implied_vol == 0.2);
    const auto fit = calibrate_local_vol(quotes, 0.0, curve, dc);
    INFO("iterations " << fit.report.iterations << " error " << fit.report.max_abs_iv_error_bp);
    REQUIRE(fit.report.converged);
    REQUIRE(fit.report.iterations <= 10);
    REQUIRE(fit.report.max_abs_iv_error_bp <= 0.1);
    // The knots absorb the first-order time error of the implicit scheme,
    // which is largest in the wings of the shortest expiry.
    const auto& s = fit.surface;
    const std::size_t nk = s.k_knots().size();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.time_knots().size(); ++i)
        for (std::size_t j = 0; j < nk; ++j) {
            const double dev = std::abs(s.values()[i * nk + j] - 0.2);
            worst = std::max(worst, dev);
            if (std::abs(s.k_knots()[j] - 1.0) < 0.07) REQUIRE(dev < 1e-3);
        }
    REQUIRE(worst < 0.025);
    const auto fine = calibrate_local_vol(quotes, 0.0, curve, dc, pde::PdeGrid{4.0, 1601, market::kOneDay / 2});
    double worst_fine = 0.0;
    for (double v : fine.surface.values()) worst_fine = std::max(worst_fine, std::abs(v - 0.2));
    REQUIRE(worst_fine < 0.6 * worst);
}

TEST_CASE("smiley market round trip", "[calib]") {
    const auto curve = synthetic_curve();
    const market::DiscountCurve dc;
    const lv::ModelParams truth{1.0, reference_local_vol()};
    const auto quotes = model_quotes(truth, pvo_templates(curve), curve, dc);
    const auto fit = calibrate_local_vol(quotes, 1.0, curve, dc);
    INFO("iterations " << fit.report.iterations);
    REQUIRE(fit.report.converged);
    REQUIRE(fit.report.iterations <= 30);
    for (double e : fit.report.per_quote_error_bp) REQUIRE(std::abs(e) <= 0.1);
}

TEST_CASE("single quote", "[calib]") {
    const auto curve = synthetic_curve();
    const auto f = synthetic_expiries()[1];
    const double F0 = market::period_futures(curve, f.maturity, f.delivery);
    const std::vector<market::VanillaQuote> one{{market::OptionKind::PVO, f.maturity, f.maturity, f.delivery, F0, 0.35}};
    const auto fit = calibrate_local_vol(one, 0.5, curve, market::DiscountCurve{});
    REQUIRE(fit.report.converged);
    REQUIRE(fit.report.iterations <= 5);
    REQUIRE(fit.surface.values().size() == 1);
}

TEST_CASE("mean reversion is recovered from mid-curve vols", "[calib]") {
    const auto curve = synthetic_curve();
    const market::DiscountCurve dc;
    const lv::ModelParams truth{1.0, reference_local_vol()};
    CalibrationTarget target;
    target.pvo = model_quotes(truth, pvo_templates(curve), curve, dc);
    target.mco = model_quotes(truth, mco_templates(curve), curve, dc);
    const auto fit = calibrate_mean_reversion(target, curve, dc);
    INFO("a = " << fit.a << " rmse " << fit.report.secondary_rmse);
    REQUIRE(std::abs(fit.a - 1.0) <= 0.05);
    REQUIRE(fit.report.a_path.size() >= 9);

    const auto only_zero = calibrate_mean_reversion(target, curve, dc, {}, {}, {0.0});
    REQUIRE(only_zero.a == 0.0);
    REQUIRE(only_zero.report.converged);
}

TEST_CASE("uninformative secondary target ties to the smallest a", "[calib]") {
    const auto curve = synthetic_curve();
    const market::DiscountCurve dc;
    CalibrationTarget target;
    target.pvo = model_quotes({0.5, reference_local_vol()}, pvo_templates(curve), curve, dc);
    for (std::size_t i = 5; i < target.pvo.size(); i += 11) target.mco.push_back(target.pvo[i]);
    const auto fit = calibrate_mean_reversion(target, curve, dc, {}, {}, {0.0, 0.5, 1.0});
    REQUIRE(fit.a == 0.0);
    REQUIRE(fit.report.secondary_rmse <= 1e-5);
}
