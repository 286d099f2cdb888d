#include "swing/spike/spike.hpp"

#include "swing/error.hpp"
#include "swing/numerics/philox.hpp"

#include <cmath>

namespace swing::spike {

void SpikeParams::validate() const {
    require(gamma > 0.0, "spike gamma must be positive");
    require(intensity >= 0.0, "spike intensity must be nonnegative");
    require(zeta >= 0.0, "spike zeta must be nonnegative");
}

double h(const SpikeParams& params, double t, double T) {
    require(t <= T, "h: t must not exceed T");
    return params.zeta * params.intensity * -std::expm1(-params.gamma * (T - t)) / params.gamma;
}

double SpikePath::operator()(double t) const {
    double y = 0.0;
    for (std::size_t i = 0; i < jump_times.size() && jump_times[i] <= t; ++i)
        y += amplitudes[i] * std::exp(-gamma * (t - jump_times[i]));
    return y;
}

SpikePath simulate_spike_path(const SpikeParams& params, double horizon, std::uint64_t seed, std::uint32_t path_index,
                              numerics::Domain domain) {
    params.validate();
    require(horizon > 0.0, "simulate_spike_path: horizon must be positive");
    SpikePath path;
    path.gamma = params.gamma;
    if (params.intensity == 0.0) return path;
    numerics::CounterRng rng(seed, domain, numerics::Stream::Spike, path_index);
    double t = rng.exponential(1.0 / params.intensity);
    while (t <= horizon) {
        path.jump_times.push_back(t);
        path.amplitudes.push_back(rng.exponential(params.zeta));
        t += rng.exponential(1.0 / params.intensity);
    }
    return path;
}

double spike_adjusted_spot(double s_t, double y_t, double t, const market::InitialCurve& curve,
                           const SpikeParams& params) {
    return curve(t) * (s_t + y_t) / (1.0 + h(params, 0.0, t));
}

double spike_instant_futures(double s_t, double y_t, double t, double T, const market::InitialCurve& curve,
                             const SpikeParams& params, double a) {
    require(t <= T, "spike_instant_futures: t must not exceed T");
    const double norm = 1.0 + h(params, 0.0, T);
    return curve(T) * (1.0 - (1.0 - s_t) * std::exp(-a * (T - t)) / norm -
                       (h(params, 0.0, t) - y_t) * std::exp(-params.gamma * (T - t)) / norm);
}

SpikePeriodWeights spike_period_weights(double T, const market::DeliveryPeriod& dp, const market::InitialCurve& curve,
                                        const SpikeParams& params, double a) {
    const double lo = T + dp.delta0, hi = T + dp.delta1;
    const double plain = curve.integrate(lo, hi, [](double) { return 1.0; });
    const double ga = curve.integrate(lo, hi, [&](double u) { return std::exp(-a * (u - T)) / (1.0 + h(params, 0.0, u)); });
    const double gg =
        curve.integrate(lo, hi, [&](double u) { return std::exp(-params.gamma * (u - T)) / (1.0 + h(params, 0.0, u)); });
    return {plain / dp.length(), ga / plain, gg / plain};
}

double spike_period_futures(double s_t, double y_t, double t, double T, const SpikePeriodWeights& w,
                            const SpikeParams& params, double a) {
    require(t <= T, "spike_period_futures: t must not exceed T");
    return w.F0 * (1.0 - (1.0 - s_t) * std::exp(-a * (T - t)) * w.G_a -
                   (h(params, 0.0, t) - y_t) * std::exp(-params.gamma * (T - t)) * w.G_gamma);
}

double spike_period_futures(double s_t, double y_t, double t, double T, const market::DeliveryPeriod& dp,
                            const market::InitialCurve& curve, const SpikeParams& params, double a) {
    return spike_period_futures(s_t, y_t, t, T, spike_period_weights(T, dp, curve, params, a), params, a);
}

} // namespace swing::spike
