#include "catch_amalgamated.hpp"

#include "swing/calib/synthetic.hpp"
#include "swing/mc/simulation.hpp"
#include "swing/numerics/statistics.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace swing;
using namespace swing::mc;
using swing::lv::LocalVolSurface;
using swing::lv::ModelParams;
using swing::market::DeliveryPeriod;
using swing::market::InitialCurve;
using swing::market::kOneDay;
using Catch::Approx;

namespace {

SimulationSchedule daily_fixings(int first_day, int n) {
    SimulationSchedule s;
    for (int d = 0; d < n; ++d) s.fixing_times.push_back((first_day + d) * kOneDay);
    return s;
}

} // namespace

TEST_CASE("near-zero vol keeps s at one", "[mc]") {
    const ModelParams p{1.0, LocalVolSurface::flat(lv::kVolFloor)};
    const auto paths = simulate_spot(p, daily_fixings(10, 5), 200, 1);
    for (double v : paths.values) REQUIRE(v == Approx(1.0).margin(1e-3));
}

TEST_CASE("paths do not depend on threads or chunking", "[mc]") {
    const ModelParams p{1.0, calib::reference_local_vol()};
    const auto sched = daily_fixings(30, 10);
    const auto one = simulate_spot(p, sched, 3000, 77, numerics::Domain::Pricing, 0, 1);
    const auto eight = simulate_spot(p, sched, 3000, 77, numerics::Domain::Pricing, 0, 8);
    REQUIRE(one.values == eight.values);
    const auto tail = simulate_spot(p, sched, 1000, 77, numerics::Domain::Pricing, 2000, 3);
    REQUIRE(std::equal(tail.values.begin(), tail.values.end(), one.values.begin() + 2000 * 10));
    const auto other = simulate_spot(p, sched, 10, 77, numerics::Domain::Regression);
    REQUIRE(other.values[0] != one.values[0]);
}

TEST_CASE("spot and fixings are martingales", "[mc]") {
    const auto curve = calib::synthetic_curve();
    const ModelParams p{1.0, calib::reference_local_vol()};
    auto sched = daily_fixings(33, 31);
    const auto paths = simulate_spot(p, sched, 100000, 5);
    const auto fix = day_ahead_fixings(paths, p, curve, sched);
    const auto fwd = day_ahead_forwards(curve, sched);
    for (std::size_t i = 0; i < sched.n_fixings(); i += 5) {
        numerics::SampleStats s, f;
        for (std::size_t k = 0; k < paths.n_paths; ++k) {
            s.add(paths.s(k, i));
            f.add(fix.F(k, i));
        }
        INFO("fixing " << i);
        REQUIRE(std::abs(s.mean() - 1.0) < 3.0 * s.std_error());
        REQUIRE(std::abs(f.mean() - fwd[i]) < 3.0 * f.std_error());
    }
    REQUIRE(paths.floor_frequency() < 1e-6);
}

TEST_CASE("fixings reduce to forwards and to the spot", "[mc]") {
    const auto curve = calib::synthetic_curve();
    const auto sched = daily_fixings(40, 4);
    PathSet ones;
    ones.n_paths = 2;
    ones.times = sched.observation_times();
    ones.values.assign(8, 1.0);
    const auto fix = day_ahead_fixings(ones, ModelParams{1.3, LocalVolSurface::flat(0.5)}, curve, sched);
    const auto fwd = day_ahead_forwards(curve, sched);
    for (std::size_t i = 0; i < 4; ++i) REQUIRE(fix.F(1, i) == Approx(fwd[i]).epsilon(1e-14));

    const auto flat = InitialCurve::flat(20.0, 2.0);
    const ModelParams p{0.0, LocalVolSurface::flat(0.4)};
    const auto paths = simulate_spot(p, sched, 50, 3);
    const auto ff = day_ahead_fixings(paths, p, flat, sched);
    for (std::size_t k = 0; k < 50; ++k)
        for (std::size_t i = 0; i < 4; ++i) REQUIRE(ff.F(k, i) == Approx(20.0 * paths.s(k, i)).epsilon(1e-13));
}

TEST_CASE("floating strikes", "[mc]") {
    const auto curve = calib::synthetic_curve();
    const auto jul = calib::monthly_futures(2018, 7);
    const MonthContract month{jul.maturity, jul.delivery};
    const double F0 = market::period_futures(curve, month.maturity, month.delivery);
    SimulationSchedule sched = daily_fixings(95, 31);
    for (int d = 65; d < 85; ++d) sched.strike_times.push_back(d * kOneDay);

    const ModelParams still{1.0, LocalVolSurface::flat(lv::kVolFloor)};
    const auto calm = simulate_spot(still, sched, 20, 9);
    for (double K : floating_strikes(calm, still, curve, sched, month)) REQUIRE(K == Approx(F0).epsilon(1e-3));

    const ModelParams p{1.0, calib::reference_local_vol()};
    const auto paths = simulate_spot(p, sched, 100000, 11);
    const auto strikes = floating_strikes(paths, p, curve, sched, month);
    numerics::SampleStats k;
    for (double x : strikes) k.add(x);
    REQUIRE(std::abs(k.mean() - F0) < 3.0 * k.std_error());

    SimulationSchedule single = sched;
    single.strike_times = {70 * kOneDay};
    const auto sp = simulate_spot(p, single, 10, 11);
    const auto one = floating_strikes(sp, p, curve, single, month);
    const lv::DeliveryRemap remap(curve, p.a, month.delivery);
    for (std::size_t i = 0; i < 10; ++i)
        REQUIRE(one[i] == Approx(lv::period_futures_closed_form(sp.s(i, 0), 70 * kOneDay, month.maturity, remap, F0)));
}

TEST_CASE("halving the step moves a coupled payoff by less than one SE", "[mc]") {
    const ModelParams p{1.0, calib::reference_local_vol()};
    SimulationSchedule coarse = daily_fixings(60, 1);
    coarse.rng_level = 1;
    SimulationSchedule fine = coarse;
    fine.level = 1;
    const auto a = simulate_spot(p, coarse, 100000, 21);
    const auto b = simulate_spot(p, fine, 100000, 21);
    numerics::SampleStats pay, diff;
    for (std::size_t k = 0; k < a.n_paths; ++k) {
        const double pa = std::max(a.s(k, 0) - 1.0, 0.0), pb = std::max(b.s(k, 0) - 1.0, 0.0);
        pay.add(pa);
        diff.add(pb - pa);
    }
    INFO("mean shift " << diff.mean() << " se " << pay.std_error());
    REQUIRE(std::abs(diff.mean()) < pay.std_error());
}

TEST_CASE("spike stream is independent and bar_s is unbiased", "[mc][spike]") {
    const auto curve = calib::synthetic_curve();
    const ModelParams p{1.0, calib::reference_local_vol()};
    const spike::SpikeParams sp{15.0, 8.0, 0.4};
    const auto sched = daily_fixings(120, 1);
    const auto paths = simulate_spot(p, sched, 100000, 31, numerics::Domain::Diagnostic, 0, 1, sp);
    const double T = sched.fixing_times[0];
    numerics::SampleStats bar, xs, ys, xy;
    for (std::size_t k = 0; k < paths.n_paths; ++k) {
        bar.add(spike::spike_adjusted_spot(paths.s(k, 0), paths.y(k, 0), T, curve, sp));
        xs.add(paths.s(k, 0) - 1.0);
        ys.add(paths.y(k, 0));
        xy.add((paths.s(k, 0) - 1.0) * paths.y(k, 0));
    }
    REQUIRE(std::abs(bar.mean() - curve(T)) < 3.0 * bar.std_error());
    // correlation of the increments over [0, T]
    const double cov = xy.mean() - xs.mean() * ys.mean();
    const double corr = cov / std::sqrt(xs.variance() * ys.variance());
    REQUIRE(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(paths.n_paths)));
}

TEST_CASE("fixings csv", "[mc][io]") {
    const auto curve = calib::synthetic_curve();
    const auto sched = daily_fixings(33, 3);
    const ModelParams p{1.0, LocalVolSurface::flat(0.5)};
    const auto fix = day_ahead_fixings(simulate_spot(p, sched, 5, 1), p, curve, sched);
    const auto path = (std::filesystem::temp_directory_path() / "swing_fix.csv").string();
    write_fixings_csv(path, fix, sched, calib::synthetic_valuation_date(), 2);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "path,date,fixing");
    std::getline(in, line);
    REQUIRE(line.rfind("0,2018-05-01,", 0) == 0);
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == 6);
    std::filesystem::remove(path);
}
