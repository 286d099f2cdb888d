#include "catch_amalgamated.hpp"

#include "swing/error.hpp"
#include "swing/market/black76.hpp"
#include "swing/market/curve.hpp"
#include "swing/market/quotes.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace swing;
using namespace swing::market;
using Catch::Approx;

TEST_CASE("black76 atm matches high precision value", "[market][black76]") {
    // mpmath, 40 digits
    REQUIRE(black76_call(20.0, 20.0, 0.2, 1.0, 1.0) == Approx(1.5931134910811593).epsilon(1e-14));
    REQUIRE(black76_call(1.0, 1.0, 0.2, 1.0, 1.0) == Approx(0.079655674554057963).epsilon(1e-14));
}

TEST_CASE("black76 degenerate inputs give intrinsic", "[market][black76]") {
    REQUIRE(black76_call(20.0, 18.0, 0.0, 1.0, 0.9) == Approx(1.8));
    REQUIRE(black76_call(20.0, 22.0, 0.3, 0.0, 1.0) == 0.0);
    REQUIRE_THROWS_AS(black76_call(-1.0, 18.0, 0.2, 1.0, 1.0), Error);
}

TEST_CASE("implied vol round trips across strikes", "[market][black76]") {
    for (double m : {0.5, 0.8, 1.0, 1.25, 2.0}) {
        for (double vol : {0.05, 0.2, 0.8}) {
            const double p = black76_call(20.0, 20.0 * m, vol, 0.75, 0.97);
            if (p - 0.97 * std::max(20.0 - 20.0 * m, 0.0) < 1e-10) continue;
            CHECK(implied_vol(p, 20.0, 20.0 * m, 0.75, 0.97) == Approx(vol).margin(1e-8));
        }
    }
    // the four-digit rounded atm price
    REQUIRE(implied_vol(1.59335, 20.0, 20.0, 1.0, 1.0) == Approx(0.20002979).margin(1e-8));
}

TEST_CASE("implied vol rejects prices outside the no-arbitrage band", "[market][black76]") {
    try {
        implied_vol(25.0, 20.0, 20.0, 1.0, 1.0);
        FAIL("no throw");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::OutOfBoundsPrice);
    }
    REQUIRE_THROWS_AS(implied_vol(1.0, 20.0, 18.0, 1.0, 1.0), Error);
    REQUIRE(implied_vol(2.0, 20.0, 18.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("one-day period futures equals that day's level", "[market][curve]") {
    std::vector<CurvePillar> pillars;
    for (int d = 0; d < 60; ++d) pillars.push_back({d * kOneDay, 20.0 + 0.1 * d});
    const InitialCurve curve(Date{}, pillars, 60 * kOneDay);
    REQUIRE(period_futures(curve, 10 * kOneDay, DeliveryPeriod{}) == Approx(21.0).epsilon(1e-14));
    REQUIRE(curve(10.5 * kOneDay) == 21.0);
}

TEST_CASE("period futures of a linear curve is the midpoint", "[market][curve]") {
    const auto curve = InitialCurve::daily_from_function([](double t) { return 20.0 + t; }, 3 * 365);
    const DeliveryPeriod year = DeliveryPeriod::from_label("1y");
    REQUIRE(period_futures(curve, 0.0, year) == Approx(20.5).epsilon(1e-13));
}

TEST_CASE("flat curve integrates exactly with exponential weight", "[market][curve]") {
    const auto curve = InitialCurve::flat(20.0, 2.0);
    const double exact = 20.0 * (1.0 - std::exp(-1.0 / 12.0));
    REQUIRE(curve.integrate(0.0, 1.0 / 12.0, [](double u) { return std::exp(-u); }) ==
            Approx(exact).epsilon(1e-14));
}

TEST_CASE("curve past its support throws", "[market][curve]") {
    const auto curve = InitialCurve::flat(20.0, 1.0);
    try {
        period_futures(curve, 0.99, DeliveryPeriod::from_label("1m"));
        FAIL("no throw");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::HorizonExceeded);
    }
}

TEST_CASE("delivery labels", "[market][curve]") {
    REQUIRE(DeliveryPeriod::from_label("1d").length() == Approx(1.0 / 365));
    REQUIRE(DeliveryPeriod::from_label("1m").length() == Approx(1.0 / 12));
    REQUIRE(DeliveryPeriod::from_label("3m").length() == Approx(0.25));
    REQUIRE_THROWS_AS(DeliveryPeriod::from_label("xm"), Error);
}

TEST_CASE("discount curve", "[market][curve]") {
    REQUIRE(DiscountCurve{}.discount(3.0) == 1.0);
    REQUIRE(DiscountCurve::flat(0.05).discount(2.0) == Approx(std::exp(-0.1)));
}

TEST_CASE("curve and quote csv round trip", "[market][io]") {
    const auto dir = std::filesystem::temp_directory_path();
    const Date val = parse_iso_date("2018-03-29");
    REQUIRE(format_iso_date(add_days(val, 3)) == "2018-04-01");

    const auto curve = InitialCurve::daily_from_function([](double t) { return 20.0 + std::sin(t); }, 400, val);
    const auto curve_path = (dir / "swing_curve_rt.csv").string();
    write_curve_csv(curve_path, curve);
    const auto back = load_curve_csv(curve_path, val);
    REQUIRE(back.pillars().size() == curve.pillars().size());
    REQUIRE(back(0.5) == Approx(curve(0.5)).epsilon(1e-10));
    REQUIRE(back.support_end() == Approx(curve.support_end()));

    SynthSpec spec;
    spec.expiries = {30 * kOneDay, 91 * kOneDay};
    spec.moneyness = {0.9, 1.0, 1.1};
    spec.smile = {0.3, -0.05, 0.2, 0.0};
    const auto quotes = synth_quotes(curve, spec);
    const auto quote_path = (dir / "swing_quotes_rt.csv").string();
    write_quotes(quote_path, quotes, val);
    const auto loaded = load_quotes(quote_path, val);
    REQUIRE(loaded.size() == 6);
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].strike == Approx(quotes[i].strike).epsilon(1e-9));
        CHECK(loaded[i].implied_vol == Approx(quotes[i].implied_vol).epsilon(1e-11));
        CHECK(loaded[i].futures_maturity == Approx(quotes[i].futures_maturity));
    }
    std::remove(curve_path.c_str());
    std::remove(quote_path.c_str());
}

TEST_CASE("malformed curve row reports its line", "[market][io]") {
    const auto path = (std::filesystem::temp_directory_path() / "swing_bad_curve.csv").string();
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("date,price\n2018-03-29,20\n2018-03-30,abc\n", f);
        std::fclose(f);
    }
    try {
        load_curve_csv(path, parse_iso_date("2018-03-29"));
        FAIL("no throw");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::MalformedRow);
        REQUIRE(std::string(e.what()).find(":3") != std::string::npos);
    }
    std::remove(path.c_str());
}
