#pragma once

#include "swing/lv/local_vol.hpp"
#include "swing/market/curve.hpp"

#include <functional>
#include <vector>

namespace swing::lv {

struct SdeCoefficients {
    double drift;
    double diffusion;
};

/// ds = a (1 - s) dt + eta(t, s) s dW.
SdeCoefficients sde_coefficients(const ModelParams& params, double t, double s);

/// F_t(T) = F_0(T) (1 - (1 - s_t) e^{-a (T - t)}).
double futures_closed_form(const ModelParams& params, double s_t, double t, double T, double F0T);

/// Normalized strike k = 1 - (1 - K / F_0(T)) e^{a (T - t)}. Throws
/// MappedStrikeNonpositive when k <= 0.
double k_F(const ModelParams& params, double t, double T, double K, double F0T);
/// Local vol of the futures price at strike K (price units).
double eta_F(const ModelParams& params, double t, double T, double K, double F0T);

/// G(t, delta) and A(t, delta) = a - d/dt log G(t, delta) for one delivery
/// period on a given curve. G is a weighted average of e^{-a (u - t)} over
/// the delivery window, so 0 < G <= 1 and G = 1 when a = 0.
class DeliveryRemap {
public:
    DeliveryRemap(const market::InitialCurve& curve, double a, market::DeliveryPeriod dp);

    double G(double t) const;
    /// Central difference of log G with a one-day step (forward at t < 1d).
    double A(double t) const;
    /// \int_t^T A(u) du = a (T - t) - log G(T) + log G(t).
    double integrated_A(double t, double T) const;

    double a() const noexcept { return a_; }
    const market::DeliveryPeriod& period() const noexcept { return dp_; }

private:
    const market::InitialCurve* curve_;
    double a_;
    market::DeliveryPeriod dp_;
};

/// s_t(delta) = 1 - (1 - s_t) G(t, delta).
double spot_delta(double s_t, const DeliveryRemap& remap, double t);

/// Local vol of s_t(delta) at level k: (1 - (1 - G)/k) eta(t, 1 - (1 - k)/G).
/// Throws BelowSupport when k <= 1 - G.
double eta_delta(const ModelParams& params, const DeliveryRemap& remap, double t, double k);

using VolFunction = std::function<double(double t, double k)>;

/// Local vol of period dst at level k given the local vol of period src.
double link_smiles(const VolFunction& eta_src, const DeliveryRemap& src, const DeliveryRemap& dst, double t, double k);
/// Same with eta_src = eta_delta(params, src, .).
double link_smiles(const ModelParams& params, const DeliveryRemap& src, const DeliveryRemap& dst, double t, double k);

/// F_t(T, delta) = F_0(T, delta) (1 - (1 - s_t(delta)) e^{-\int_t^T A}).
double period_futures_closed_form(double s_t, double t, double T, const DeliveryRemap& remap, double F0Tdelta);

} // namespace swing::lv
