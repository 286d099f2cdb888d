#include "catch_amalgamated.hpp"

#include "swing/calib/synthetic.hpp"
#include "swing/error.hpp"
#include "swing/lsmc/pricer.hpp"
#include "swing/lsmc/reference.hpp"
#include "swing/numerics/philox.hpp"
#include "swing/numerics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

using namespace swing;
using namespace swing::lsmc;
using swing::market::kOneDay;
using Catch::Approx;

namespace {

SwingContract small_contract(int nf, double N_m, double N_M, double C_m, double C_M, SwingMode mode,
                             double K = 20.0) {
    SwingContract c;
    for (int d = 0; d < nf; ++d) c.schedule.fixing_times.push_back((10 + d) * kOneDay);
    c.N_m = N_m;
    c.N_M = N_M;
    c.C_m = C_m;
    c.C_M = C_M;
    c.mode = mode;
    c.strike = K;
    return c;
}

mc::FixingSet make_fixings(std::size_t n_paths, std::size_t nf, const std::function<double(std::size_t, std::size_t)>& f) {
    mc::FixingSet fx;
    fx.n_paths = n_paths;
    fx.n_fixings = nf;
    for (std::size_t p = 0; p < n_paths; ++p)
        for (std::size_t i = 0; i < nf; ++i) fx.fixings.push_back(f(p, i));
    return fx;
}

std::vector<double> ones(int n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0); }

} // namespace

TEST_CASE("global bounds follow the reachability form", "[lsmc]") {
    const auto c = small_contract(31, 0.0, 1.0, 12.5, 20.0, SwingMode::Continuous);
    REQUIRE(global_bounds(c, 0) == std::pair{0.0, 0.0});
    REQUIRE(global_bounds(c, 5) == std::pair{0.0, 5.0});
    REQUIRE(global_bounds(c, 25) == std::pair{6.5, 20.0});
    REQUIRE(global_bounds(c, 31) == std::pair{12.5, 20.0});
    REQUIRE_THROWS_AS(global_bounds(c, 32), Error);
}

TEST_CASE("contract validation rejects infeasible constraints", "[lsmc]") {
    REQUIRE_THROWS_AS(small_contract(3, 1.0, 1.0, 0, 3, SwingMode::BangBang).validate(), Error);
    REQUIRE_THROWS_AS(small_contract(3, 0.0, 1.0, 4, 5, SwingMode::BangBang).validate(), Error);
    REQUIRE_THROWS_AS(small_contract(3, 1.0, 2.0, 0, 2, SwingMode::BangBang).validate(), Error);
    auto c = small_contract(3, 0.0, 1.0, 0, 3, SwingMode::Continuous);
    c.delta = 0.0;
    REQUIRE_THROWS_AS(c.validate(), Error);
}

TEST_CASE("two-date grid by hand", "[lsmc]") {
    const auto c = small_contract(2, 0.0, 1.0, 0.0, 2.0, SwingMode::BangBang);
    const auto g = build_grid(c);
    REQUIRE(g.levels[0] == std::vector<double>{0.0});
    REQUIRE(g.levels[1] == std::vector<double>{0.0, 1.0});
    REQUIRE(g.levels[2] == std::vector<double>{0.0, 1.0, 2.0});
    REQUIRE(admissible_actions(c, g, 2, 1.0) == std::vector<double>{0.0, 1.0});
    REQUIRE(admissible_actions(c, g, 1, 0.0) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("April 2019 grid envelope fans out then clamps", "[lsmc]") {
    SwingContract c = small_contract(30, 0.0, 1.0, 5.2, 15.7, SwingMode::Continuous);
    c.delta = 1.0 / 6.0;
    const auto g = build_grid(c);
    for (int i = 1; i <= 30; ++i) {
        const auto& lv = g.levels[static_cast<std::size_t>(i)];
        const auto [D, U] = global_bounds(c, i);
        REQUIRE(lv.back() == Approx(std::min(1.0 * i, 15.7)).margin(1e-12));
        REQUIRE(lv.front() == Approx(std::max(0.0, 5.2 - (30 - i))).margin(1e-12));
        for (std::size_t j = 0; j < lv.size(); ++j) {
            REQUIRE(lv[j] >= D - 1e-12);
            REQUIRE(lv[j] <= U + 1e-12);
            if (j) REQUIRE(lv[j] - lv[j - 1] <= c.delta + 1e-12);
        }
    }
    // every bang-bang level is present and marked
    const auto bb = build_grid([&] { auto b = c; b.mode = SwingMode::BangBang; return b; }());
    for (std::size_t i = 0; i < bb.levels.size(); ++i)
        for (double x : bb.levels[i]) {
            const auto& lv = g.levels[i];
            auto it = std::lower_bound(lv.begin(), lv.end(), x - 1e-9);
            REQUIRE(it != lv.end());
            REQUIRE(*it == Approx(x).margin(1e-9));
            REQUIRE(g.bang_bang[i][static_cast<std::size_t>(it - lv.begin())]);
        }
}

TEST_CASE("thickening is a no-op when delta exceeds every gap", "[lsmc]") {
    auto c = small_contract(10, 0.0, 1.0, 2.5, 7.0, SwingMode::Continuous);
    c.delta = 5.0;
    auto b = c;
    b.mode = SwingMode::BangBang;
    REQUIRE(build_grid(c).levels == build_grid(b).levels);
}

TEST_CASE("forced terminal consumption", "[lsmc]") {
    const auto c = small_contract(4, 0.0, 1.0, 3.0, 4.0, SwingMode::BangBang);
    const auto g = build_grid(c);
    REQUIRE(admissible_actions(c, g, 4, 2.0) == std::vector<double>{1.0});
    REQUIRE(admissible_actions(c, g, 3, 1.0) == std::vector<double>{1.0});
}

TEST_CASE("two-path toy prices at one", "[lsmc]") {
    const auto c = small_contract(2, 0.0, 1.0, 0.0, 1.0, SwingMode::BangBang);
    const auto g = build_grid(c);
    const auto fx = make_fixings(2, 2, [](std::size_t p, std::size_t i) { return i == 0 ? 20.0 : (p == 0 ? 22.0 : 18.0); });
    const auto rc = backward_regression(fx, g, c, ones(2));
    REQUIRE(rc.fallback[1]);
    REQUIRE(rc.in_sample_value == Approx(1.0).epsilon(1e-14));
    const auto r = forward_price(rc, fx, g, c, ones(2));
    REQUIRE(r.price == Approx(1.0).epsilon(1e-14));
    REQUIRE(r.consumption_profile == std::vector<double>{0.0, 0.5});
}

TEST_CASE("single fixing date uses the terminal rule only", "[lsmc]") {
    const auto c = small_contract(1, 0.0, 1.0, 0.0, 1.0, SwingMode::Continuous);
    const auto g = build_grid(c);
    const auto fx = make_fixings(4, 1, [](std::size_t p, std::size_t) { return 17.0 + 2.0 * static_cast<double>(p); });
    const auto rc = backward_regression(fx, g, c, ones(1));
    const auto r = forward_price(rc, fx, g, c, ones(1));
    REQUIRE(r.price == Approx((1.0 + 3.0) / 4.0));
}

TEST_CASE("forced plan prices the forward strip exactly", "[lsmc]") {
    const auto curve = calib::synthetic_curve();
    const lv::ModelParams p{1.0, calib::reference_local_vol()};
    const auto c = reference_contract(curve, 7.0, 7.0, SwingMode::Continuous, 7);
    const auto dc = market::DiscountCurve::flat(0.03);
    const auto df = payment_discounts(c, dc);
    const auto paths = mc::simulate_spot(p, c.schedule, 4000, 3, numerics::Domain::Pricing);
    const auto fx = mc::day_ahead_fixings(paths, p, curve, c.schedule);
    const auto g = build_grid(c);
    const auto r = forward_price(backward_regression(fx, g, c, df), fx, g, c, df);
    double strip = 0.0, fwd = 0.0;
    const auto F0 = mc::day_ahead_forwards(curve, c.schedule);
    for (std::size_t i = 0; i < 7; ++i) {
        double m = 0.0;
        for (std::size_t k = 0; k < fx.n_paths; ++k) m += fx.F(k, i);
        strip += (m / static_cast<double>(fx.n_paths) - c.strike) * df[i];
        fwd += (F0[i] - c.strike) * df[i];
    }
    REQUIRE(r.price == Approx(strip).epsilon(1e-12));
    REQUIRE(std::abs(r.price - fwd) < 3.0 * r.std_error);
    REQUIRE(r.bang_bang_fraction == 1.0);
}

TEST_CASE("zero-vol paths fall back to the sample mean", "[lsmc]") {
    const auto c = small_contract(5, 0.0, 1.0, 1.0, 3.0, SwingMode::Continuous);
    const auto g = build_grid(c);
    const std::vector<double> F = {19.0, 21.0, 23.0, 18.0, 22.0};
    const auto fx = make_fixings(50, 5, [&](std::size_t, std::size_t i) { return F[i]; });
    const auto rc = backward_regression(fx, g, c, ones(5));
    for (int i = 1; i < 5; ++i) REQUIRE(rc.fallback[static_cast<std::size_t>(i)]);
    const auto r = forward_price(rc, fx, g, c, ones(5));
    // best deterministic plan: the three highest fixings
    REQUIRE(r.price == Approx(1.0 + 3.0 + 2.0));
    REQUIRE(r.std_error == 0.0);
}

TEST_CASE("three-date Markov chain matches exhaustive dynamic programming", "[lsmc]") {
    const std::vector<double> states = {18.0, 20.0, 22.5};
    const std::vector<double> start = {0.3, 0.4, 0.3};
    const double P[3][3] = {{0.5, 0.3, 0.2}, {0.25, 0.5, 0.25}, {0.2, 0.3, 0.5}};
    auto draw = [](const double* w, double u) {
        double acc = 0.0;
        for (int s = 0; s < 2; ++s) {
            acc += w[s];
            if (u < acc) return s;
        }
        return 2;
    };
    auto sample = [&](std::size_t n, numerics::Domain domain) {
        std::vector<int> idx(n * 3);
        for (std::size_t p = 0; p < n; ++p) {
            numerics::CounterRng rng(11, domain, numerics::Stream::Misc, p);
            int s = draw(start.data(), rng.uniform());
            for (int i = 0; i < 3; ++i) {
                if (i) s = draw(P[s], rng.uniform());
                idx[p * 3 + static_cast<std::size_t>(i)] = s;
            }
        }
        return make_fixings(n, 3, [&](std::size_t p, std::size_t i) { return states[static_cast<std::size_t>(idx[p * 3 + i])]; });
    };

    for (auto mode : {SwingMode::BangBang, SwingMode::Continuous}) {
        auto c = small_contract(3, 0.0, 1.0, 1.5, 2.0, mode, 20.0);
        c.delta = 0.5;
        const auto g = build_grid(c);
        // V(i, state, C): value from date i on, state at date i known
        std::function<double(int, int, double)> dp = [&](int i, int s, double C) {
            double best = -1e300;
            for (double n : admissible_actions(c, g, i, C)) {
                double v = n * (states[static_cast<std::size_t>(s)] - c.strike);
                if (i < 3)
                    for (int t = 0; t < 3; ++t) v += P[s][t] * dp(i + 1, t, C + n);
                best = std::max(best, v);
            }
            return best;
        };
        double exact = 0.0;
        for (int s = 0; s < 3; ++s) exact += start[static_cast<std::size_t>(s)] * dp(1, s, 0.0);

        const auto reg = sample(20000, numerics::Domain::Regression);
        const auto px = sample(20000, numerics::Domain::Pricing);
        const auto rc = backward_regression(reg, g, c, ones(3));
        const auto r = forward_price(rc, px, g, c, ones(3));
        INFO("mode " << static_cast<int>(mode) << " exact " << exact << " lsmc " << r.price << " se " << r.std_error);
        REQUIRE(std::abs(r.price - exact) <= 2.0 * r.std_error);
    }
}

TEST_CASE("regression uses only the current and later dates", "[lsmc]") {
    const auto curve = calib::synthetic_curve();
    const lv::ModelParams p{1.0, calib::reference_local_vol()};
    const auto c = reference_contract(curve, 3.0, 5.0, SwingMode::Continuous, 7);
    const auto g = build_grid(c);
    const auto paths = mc::simulate_spot(p, c.schedule, 3000, 9, numerics::Domain::Regression);
    auto fx = mc::day_ahead_fixings(paths, p, curve, c.schedule);
    const auto base = backward_regression(fx, g, c, ones(7));
    // shuffle the first two dates across paths
    const auto orig = fx;
    for (std::size_t k = 0; k < fx.n_paths; ++k)
        for (std::size_t i = 0; i < 2; ++i) fx.fixings[k * 7 + i] = orig.F((k * 7 + 13) % fx.n_paths, i);
    const auto moved = backward_regression(fx, g, c, ones(7));
    for (int i = 3; i < 7; ++i) REQUIRE(moved.beta[static_cast<std::size_t>(i)] == base.beta[static_cast<std::size_t>(i)]);
    REQUIRE(moved.beta[2] != base.beta[2]);

    // reordering paths only changes rounding
    mc::FixingSet rev = fx;
    for (std::size_t k = 0; k < fx.n_paths; ++k)
        for (std::size_t i = 0; i < 7; ++i) rev.fixings[k * 7 + i] = fx.F(fx.n_paths - 1 - k, i);
    const auto a = backward_regression(fx, g, c, ones(7));
    const auto b = backward_regression(rev, g, c, ones(7));
    for (int i = 1; i < 7; ++i)
        for (std::size_t j = 0; j < a.beta[static_cast<std::size_t>(i)].size(); ++j)
            for (int q = 0; q < 3; ++q)
                REQUIRE(b.beta[static_cast<std::size_t>(i)][j][static_cast<std::size_t>(q)] ==
                        Approx(a.beta[static_cast<std::size_t>(i)][j][static_cast<std::size_t>(q)]).margin(1e-9));
}

TEST_CASE("pricing is reproducible across threads and chunks", "[lsmc]") {
    const auto curve = calib::synthetic_curve();
    const lv::ModelParams p{1.0, calib::reference_local_vol()};
    const auto c = reference_contract(curve, 3.0, 5.0, SwingMode::Continuous, 7);
    const auto dc = market::DiscountCurve::flat(0.0);
    LsmcConfig cfg;
    cfg.regression_paths = 5000;
    cfg.pricing_paths = 9000;
    cfg.chunk_paths = 9000;
    const auto one = price_swing(c, p, curve, dc, cfg, 5);
    cfg.threads = 3;
    cfg.chunk_paths = 2500;
    const auto other = price_swing(c, p, curve, dc, cfg, 5);
    REQUIRE(one.price == other.price);
    REQUIRE(one.std_error == other.std_error);
    REQUIRE(one.consumption_profile == other.consumption_profile);
    REQUIRE(one.n_paths == 9000);
    REQUIRE(one.pricing_seed == 5);
}

TEST_CASE("bang-bang restriction never beats continuous", "[lsmc]") {
    const auto curve = calib::synthetic_curve();
    const lv::ModelParams p{1.0, calib::reference_local_vol()};
    const auto dc = market::DiscountCurve::flat(0.0);
    LsmcConfig cfg;
    cfg.regression_paths = 20000;
    cfg.pricing_paths = 20000;
    for (double cm : {3.0, 3.5}) {
        const auto cont = price_swing(reference_contract(curve, cm, 5.0, SwingMode::Continuous, 7), p, curve, dc, cfg, 8);
        const auto bb = price_swing(reference_contract(curve, cm, 5.0, SwingMode::BangBang, 7), p, curve, dc, cfg, 8);
        const double se = std::hypot(cont.std_error, bb.std_error);
        REQUIRE(bb.price <= cont.price + 2.0 * se);
        REQUIRE(bb.bang_bang_fraction == 1.0);
        double total = 0.0;
        for (double v : cont.consumption_profile) total += v;
        REQUIRE(total >= cm - 1e-9);
        REQUIRE(total <= 5.0 + 1e-9);
    }
}

TEST_CASE("floating strike prices with the extended basis", "[lsmc]") {
    const auto curve = calib::synthetic_curve();
    const lv::ModelParams p{1.0, calib::reference_local_vol()};
    const auto dc = market::DiscountCurve::flat(0.0);
    LsmcConfig cfg;
    cfg.regression_paths = 10000;
    cfg.pricing_paths = 10000;
    const auto c = floating_reference_contract(curve, 3.0, 5.0, SwingMode::Continuous, 7);
    const auto r = price_swing(c, p, curve, dc, cfg, 4);
    REQUIRE(std::isfinite(r.price));
    REQUIRE(r.price > 0.0);
    // a fixed strike at the same futures level is a different contract but of similar size
    const auto f = price_swing(reference_contract(curve, 3.0, 5.0, SwingMode::Continuous, 7), p, curve, dc, cfg, 4);
    REQUIRE(r.price == Approx(f.price).epsilon(0.5));
}
