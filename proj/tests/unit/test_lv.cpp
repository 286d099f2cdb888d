#include "catch_amalgamated.hpp"

#include "swing/error.hpp"
#include "swing/lv/model.hpp"
#include "swing/numerics/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace swing;
using namespace swing::lv;
using swing::market::DeliveryPeriod;
using swing::market::InitialCurve;
using swing::market::kOneDay;
using Catch::Approx;

namespace {

ModelParams flat_params(double a, double vol) { return {a, LocalVolSurface::flat(vol)}; }

} // namespace

TEST_CASE("sde coefficients", "[lv]") {
    const auto p = flat_params(1.0, 0.2);
    REQUIRE(sde_coefficients(p, 0.3, 1.0).drift == 0.0);
    const auto c = sde_coefficients(p, 0.3, 0.8);
    REQUIRE(c.drift == Approx(0.2));
    REQUIRE(c.diffusion == Approx(0.16));
    REQUIRE(sde_coefficients(flat_params(0.0, 0.2), 0.0, 0.3).drift == 0.0);
}

TEST_CASE("instantaneous futures closed form", "[lv]") {
    const auto p = flat_params(1.0, 0.2);
    REQUIRE(futures_closed_form(p, 1.0, 0.2, 1.0, 20.0) == 20.0);
    REQUIRE(futures_closed_form(p, 0.7, 1.0, 1.0, 20.0) == Approx(14.0));
    REQUIRE(futures_closed_form(p, 0.9, 0.0, 1.0, 20.0) == Approx(19.264241117657115).epsilon(1e-14));
}

TEST_CASE("mapped strike", "[lv]") {
    REQUIRE(k_F(flat_params(0.0, 0.2), 0.0, 1.0, 18.0, 20.0) == Approx(0.9));
    REQUIRE(k_F(flat_params(1.7, 0.2), 0.0, 1.0, 20.0, 20.0) == 1.0);
    REQUIRE(k_F(flat_params(1.0, 0.2), 0.0, 0.5, 18.0, 20.0) == Approx(0.83512787292998719).epsilon(1e-14));
    try {
        k_F(flat_params(2.0, 0.2), 0.0, 2.0, 1.0, 20.0);
        FAIL("no throw");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::MappedStrikeNonpositive);
    }
    // eta_F at the money: K - F (1 - e^{-a tau}) = F e^{-a tau}
    REQUIRE(eta_F(flat_params(1.0, 0.2), 0.0, 0.5, 20.0, 20.0) == Approx(20.0 * std::exp(-0.5) * 0.2));
}

TEST_CASE("local vol surface interpolation and clamping", "[lv]") {
    const LocalVolSurface s({0.5, 1.0}, {0.8, 1.0, 1.2}, {0.3, 0.2, 0.25, 10.0, 0.0, 0.1});
    REQUIRE(s(0.1, 1.0) == Approx(0.2));
    REQUIRE(s(0.5, 0.8) == Approx(0.3));
    REQUIRE(s(0.7, 1.0) == Approx(kVolFloor));
    REQUIRE(s(3.0, 0.8) == Approx(kVolCap));
    REQUIRE(s(0.2, 0.01) == Approx(0.3));
    REQUIRE(s(0.2, 9.0) == Approx(0.25));
    const double mid = s(0.2, 0.9);
    REQUIRE(mid >= 0.2);
    REQUIRE(mid <= 0.3);

    const auto path = (std::filesystem::temp_directory_path() / "swing_lv_rt.csv").string();
    s.save_csv(path);
    const auto back = LocalVolSurface::load_csv(path);
    REQUIRE(back.values() == s.values());
    REQUIRE(back(0.7, 1.1) == s(0.7, 1.1));
    std::filesystem::remove(path);
}

TEST_CASE("G on a flat curve", "[lv][remap]") {
    const auto curve = InitialCurve::flat(20.0, 3.0);
    const DeliveryRemap month(curve, 1.0, DeliveryPeriod::from_label("1m"));
    // mpmath: (1 - e^{-1/12}) * 12
    REQUIRE(month.G(0.5) == Approx(0.95946702444812103).epsilon(1e-13));
    REQUIRE(DeliveryRemap(curve, 0.0, DeliveryPeriod::from_label("6m")).G(0.3) == 1.0);
    REQUIRE(DeliveryRemap(curve, 0.0, DeliveryPeriod::from_label("6m")).A(0.3) == 0.0);

    // small-interval limit
    const DeliveryRemap day(curve, 1.5, DeliveryPeriod::days(10, 1, "1d"));
    const DeliveryRemap sliver(curve, 1.5, DeliveryPeriod{10 * kOneDay, 10 * kOneDay + 1e-6, "sliver"});
    REQUIRE(sliver.G(0.2) == Approx(std::exp(-1.5 * 10 * kOneDay)).epsilon(1e-6));
    const double exact_day = std::exp(-15.0 / 365) * (1.0 - std::exp(-1.5 / 365)) / (1.5 / 365);
    REQUIRE(day.G(0.2) == Approx(exact_day).epsilon(1e-13));
    // G is time homogeneous on a flat curve, so A = a
    REQUIRE(month.A(0.4) == Approx(1.0).epsilon(1e-10));
    for (double t : {0.0, 0.3, 1.2}) REQUIRE(month.G(t) <= 1.0);
}

TEST_CASE("spot_delta and eta_delta", "[lv][remap]") {
    const auto curve = InitialCurve::flat(20.0, 3.0);
    const DeliveryRemap month(curve, 1.0, DeliveryPeriod::from_label("1m"));
    REQUIRE(spot_delta(1.0, month, 0.2) == 1.0);
    REQUIRE(1.0 - 0.5 * 0.9594 == Approx(0.5203).epsilon(1e-12));
    REQUIRE(spot_delta(0.5, month, 0.2) == Approx(1.0 - 0.5 * month.G(0.2)));
    REQUIRE(spot_delta(0.37, DeliveryRemap(curve, 0.0, DeliveryPeriod{}), 0.2) == 0.37);

    const auto p = flat_params(1.0, 0.2);
    REQUIRE(eta_delta(p, month, 0.2, 1.0) == Approx(0.19189340488962421).epsilon(1e-12));
    const DeliveryRemap no_mr(curve, 0.0, DeliveryPeriod::from_label("1m"));
    const ModelParams smile{0.0, LocalVolSurface({1.0}, {0.8, 1.0, 1.3}, {0.3, 0.2, 0.27})};
    for (double k : {0.5, 0.9, 1.1, 2.0}) REQUIRE(eta_delta(smile, no_mr, 0.3, k) == smile.localvol(0.3, k));
    try {
        eta_delta(p, month, 0.2, 0.01);
        FAIL("no throw");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::BelowSupport);
    }
}

TEST_CASE("link_smiles agrees with the direct period vol", "[lv][remap]") {
    const auto curve = InitialCurve::daily_from_function([](double t) { return 20.0 + 3.0 * std::cos(6.283 * t); }, 1200);
    const ModelParams p{1.2, LocalVolSurface({0.5, 1.0}, {0.7, 1.0, 1.4}, {0.5, 0.3, 0.4, 0.45, 0.25, 0.35})};
    const DeliveryRemap month(curve, p.a, DeliveryPeriod::from_label("1m"));
    const DeliveryRemap quarter(curve, p.a, DeliveryPeriod::from_label("3m"));
    const DeliveryRemap day(curve, p.a, DeliveryPeriod{});
    for (double t : {0.1, 0.6, 1.5})
        for (double k : {0.6, 0.95, 1.0, 1.3, 2.5}) {
            CHECK(link_smiles(p, month, day, t, k) == Approx(eta_delta(p, day, t, k)).epsilon(1e-12));
            CHECK(link_smiles(p, month, quarter, t, k) == Approx(eta_delta(p, quarter, t, k)).epsilon(1e-12));
            CHECK(link_smiles(p, month, month, t, k) == Approx(eta_delta(p, month, t, k)).epsilon(1e-14));
        }
}

TEST_CASE("period futures closed form", "[lv][remap]") {
    const auto curve = InitialCurve::daily_from_function([](double t) { return 20.0 + 2.0 * std::sin(4.0 * t); }, 1000);
    const DeliveryPeriod dp = DeliveryPeriod::from_label("1m");
    const DeliveryRemap remap(curve, 0.8, dp);
    const double T = 0.6;
    const double F0 = market::period_futures(curve, T, dp);
    REQUIRE(period_futures_closed_form(1.0, 0.2, T, remap, F0) == Approx(F0).epsilon(1e-15));
    REQUIRE(period_futures_closed_form(0.7, T, T, remap, F0) == Approx(F0 * spot_delta(0.7, remap, T)).epsilon(1e-14));

    // average of instantaneous futures over the delivery window
    const ModelParams p{0.8, LocalVolSurface::flat(0.3)};
    for (double s : {0.3, 0.9, 1.6}) {
        const double t = 0.25;
        const double avg = curve.integrate(T + dp.delta0, T + dp.delta1, [&](double u) {
                               return futures_closed_form(p, s, t, u, 1.0);
                           }) / dp.length();
        REQUIRE(period_futures_closed_form(s, t, T, remap, F0) == Approx(avg).epsilon(1e-6));
    }

    // one-day period with no mean reversion is the instantaneous formula
    const DeliveryRemap day0(curve, 0.0, DeliveryPeriod{});
    const double F0d = market::period_futures(curve, T, DeliveryPeriod{});
    REQUIRE(period_futures_closed_form(0.8, 0.1, T, day0, F0d) ==
            Approx(futures_closed_form(ModelParams{0.0, LocalVolSurface::flat(0.2)}, 0.8, 0.1, T, F0d)));

    // positivity above the support bound
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double t = 0.5 * u(rng);
        const double s = (1.0 - remap.G(t)) + 1e-6 + 2.0 * u(rng);
        REQUIRE(period_futures_closed_form(s, t, T, remap, F0) > 0.0);
    }
}
