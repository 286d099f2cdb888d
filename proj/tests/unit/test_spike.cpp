#include "catch_amalgamated.hpp"

#include "swing/lv/model.hpp"
#include "swing/numerics/philox.hpp"
#include "swing/numerics/quadrature.hpp"
#include "swing/numerics/statistics.hpp"
#include "swing/spike/spike.hpp"

#include <cmath>

using namespace swing;
using namespace swing::spike;
using swing::market::DeliveryPeriod;
using swing::market::InitialCurve;
using Catch::Approx;

TEST_CASE("philox known answers", "[rng]") {
    const auto a = numerics::philox4x32({0, 0, 0, 0}, {0, 0});
    REQUIRE(a == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto b = numerics::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    REQUIRE(b == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    const auto c = numerics::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    REQUIRE(c == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter rng moments", "[rng]") {
    numerics::CounterRng rng(42, numerics::Domain::Diagnostic, numerics::Stream::Misc, 3);
    numerics::SampleStats z, z2;
    for (int i = 0; i < 200000; ++i) {
        const double x = rng.normal();
        z.add(x);
        z2.add(x * x);
    }
    REQUIRE(std::abs(z.mean()) < 4.0 * z.std_error());
    REQUIRE(std::abs(z2.mean() - 1.0) < 4.0 * z2.std_error());
}

TEST_CASE("h closed form", "[spike]") {
    REQUIRE(h({10.0, 0.0, 0.5}, 0.0, 1.0) == 0.0);
    REQUIRE(h({10.0, 2.0, 0.5}, 0.4, 0.4) == 0.0);
    REQUIRE(h({10.0, 2.0, 0.5}, 0.0, 1.0) == Approx(0.099995460007023752).epsilon(1e-14));
    // defining integral zeta * lambda * \int_t^T e^{-gamma (T - u)} du
    double quad = 0.0;
    for (int i = 0; i < 10; ++i)
        quad += numerics::gauss_legendre8([](double u) { return 0.5 * 2.0 * std::exp(-10.0 * (1.0 - u)); }, 0.1 * i, 0.1 * (i + 1));
    REQUIRE(h({10.0, 2.0, 0.5}, 0.0, 1.0) == Approx(quad).epsilon(1e-12));
}

TEST_CASE("spike paths", "[spike]") {
    const SpikeParams none{10.0, 0.0, 0.5};
    const auto flat = simulate_spike_path(none, 2.0, 1);
    REQUIRE(flat.jump_times.empty());
    REQUIRE(flat(1.5) == 0.0);

    const SpikeParams p{10.0, 6.0, 0.5};
    const auto a = simulate_spike_path(p, 2.0, 99, 7);
    const auto b = simulate_spike_path(p, 2.0, 99, 7);
    REQUIRE(a.jump_times == b.jump_times);
    REQUIRE(a.amplitudes == b.amplitudes);
    REQUIRE(a(0.0) == 0.0);

    const double T = 1.0;
    numerics::SampleStats y;
    for (std::uint32_t k = 0; k < 100000; ++k) y.add(simulate_spike_path(p, T, 2024, k)(T));
    REQUIRE(std::abs(y.mean() - h(p, 0.0, T)) < 3.0 * y.std_error());
}

TEST_CASE("spike adjusted futures", "[spike]") {
    const auto curve = InitialCurve::daily_from_function([](double t) { return 20.0 + 2.0 * std::sin(5.0 * t); }, 900);
    const SpikeParams p{12.0, 4.0, 0.3};
    const double a = 1.0;
    for (double T : {0.0, 0.2, 1.1}) REQUIRE(spike_instant_futures(1.0, 0.0, 0.0, T, curve, p, a) == Approx(curve(T)).epsilon(1e-15));
    REQUIRE(spike_adjusted_spot(1.0, 0.0, 0.0, curve, p) == curve(0.0));

    // spike-free degeneration
    const SpikeParams none{12.0, 0.0, 0.3};
    const lv::ModelParams mp{a, lv::LocalVolSurface::flat(0.3)};
    REQUIRE(spike_instant_futures(0.8, 0.0, 0.3, 0.9, curve, none, a) ==
            Approx(lv::futures_closed_form(mp, 0.8, 0.3, 0.9, curve(0.9))).epsilon(1e-14));

    // increasing in y
    REQUIRE(spike_instant_futures(0.8, 0.2, 0.3, 0.5, curve, p, a) > spike_instant_futures(0.8, 0.1, 0.3, 0.5, curve, p, a));

    // period version
    const DeliveryPeriod month = DeliveryPeriod::from_label("1m");
    const double F0 = market::period_futures(curve, 0.6, month);
    REQUIRE(spike_period_futures(1.0, 0.0, 0.0, 0.6, month, curve, p, a) == Approx(F0).epsilon(1e-13));
    const lv::DeliveryRemap remap(curve, a, month);
    REQUIRE(spike_period_futures(0.7, 0.0, 0.2, 0.6, month, curve, none, a) ==
            Approx(lv::period_futures_closed_form(0.7, 0.2, 0.6, remap, F0)).epsilon(1e-13));
    REQUIRE(spike_period_futures(0.7, 0.4, 0.2, 0.6, month, curve, p, a) >
            spike_period_futures(0.7, 0.1, 0.2, 0.6, month, curve, p, a));

    // one-day window on a flat curve against the instantaneous formula
    const auto flat = InitialCurve::flat(20.0, 3.0);
    const double inst = spike_instant_futures(0.9, 0.15, 0.1, 0.5, flat, p, a);
    const double day = spike_period_futures(0.9, 0.15, 0.1, 0.5, DeliveryPeriod{}, flat, p, a);
    REQUIRE(day == Approx(inst).epsilon(5e-3));
    // and the period value equals the delivery average of the instantaneous one
    const double avg = flat.integrate(0.5, 0.5 + month.length(), [&](double u) {
                           return spike_instant_futures(0.9, 0.15, 0.1, u, flat, p, a) / 20.0;
                       }) / month.length();
    REQUIRE(spike_period_futures(0.9, 0.15, 0.1, 0.5, month, flat, p, a) == Approx(avg).epsilon(1e-10));
}
