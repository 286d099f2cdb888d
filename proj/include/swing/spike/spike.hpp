#pragma once

#include "swing/market/curve.hpp"
#include "swing/numerics/philox.hpp"

#include <cstdint>
#include <vector>

namespace swing::spike {

struct SpikeParams {
    double gamma = 10.0;    // decay speed, 1/year
    double intensity = 0.0; // Poisson intensity, 1/year
    double zeta = 0.0;      // mean jump amplitude

    void validate() const;
};

/// h(t, T) = zeta * intensity * (1 - e^{-gamma (T - t)}) / gamma.
double h(const SpikeParams& params, double t, double T);

/// y(t) = sum over jumps tau_i <= t of phi_i e^{-gamma (t - tau_i)}.
struct SpikePath {
    double gamma = 10.0;
    std::vector<double> jump_times;
    std::vector<double> amplitudes;

    double operator()(double t) const;
};

/// Jump times from a homogeneous Poisson process on [0, horizon], amplitudes
/// exponential with mean zeta. Uses the spike substream of `path_index`.
SpikePath simulate_spike_path(const SpikeParams& params, double horizon, std::uint64_t seed,
                              std::uint32_t path_index = 0,
                              numerics::Domain domain = numerics::Domain::Diagnostic);

/// bar_s_t = f_0(t) (s_t + y_t) / (1 + h(0, t)).
double spike_adjusted_spot(double s_t, double y_t, double t, const market::InitialCurve& curve,
                           const SpikeParams& params);

/// bar_f_t(T) = E_t[bar_s_T] under mean reversion a for s and gamma for y.
double spike_instant_futures(double s_t, double y_t, double t, double T, const market::InitialCurve& curve,
                             const SpikeParams& params, double a);

/// Delivery-period weights of the spike-adjusted curve:
/// G^{c,h}(T) = (1 / F_0(T, delta)) \int w(u - T) f_0(u) e^{-c (u - T)} / (1 + h(0, u)) du
/// for c = a and c = gamma.
struct SpikePeriodWeights {
    double F0;
    double G_a;
    double G_gamma;
};

SpikePeriodWeights spike_period_weights(double T, const market::DeliveryPeriod& dp, const market::InitialCurve& curve,
                                        const SpikeParams& params, double a);

/// bar_F_t(T, delta) = F_0(T, delta) [1 - (1 - s_t) e^{-a (T - t)} G^{a,h}(T)
///                     - (h(0, t) - y_t) e^{-gamma (T - t)} G^{gamma,h}(T)].
double spike_period_futures(double s_t, double y_t, double t, double T, const market::DeliveryPeriod& dp,
                            const market::InitialCurve& curve, const SpikeParams& params, double a);
double spike_period_futures(double s_t, double y_t, double t, double T, const SpikePeriodWeights& weights,
                            const SpikeParams& params, double a);

} // namespace swing::spike
