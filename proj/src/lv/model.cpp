#include "swing/lv/model.hpp"

#include "swing/error.hpp"

#include <cmath>
#include <cstdio>

namespace swing::lv {

SdeCoefficients sde_coefficients(const ModelParams& params, double t, double s) {
    return {params.a * (1.0 - s), params.localvol(t, s) * s};
}

double futures_closed_form(const ModelParams& params, double s_t, double t, double T, double F0T) {
    require(t <= T, "futures_closed_form: t must not exceed T");
    return F0T * (1.0 - (1.0 - s_t) * std::exp(-params.a * (T - t)));
}

double k_F(const ModelParams& params, double t, double T, double K, double F0T) {
    const double k = 1.0 - (1.0 - K / F0T) * std::exp(params.a * (T - t));
    if (!(k > 0.0)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "strike %g maps to k = %g (t=%g, T=%g, F=%g)", K, k, t, T, F0T);
        throw Error(ErrorCode::MappedStrikeNonpositive, buf);
    }
    return k;
}

double eta_F(const ModelParams& params, double t, double T, double K, double F0T) {
    const double k = k_F(params, t, T, K, F0T);
    return (K - F0T * (1.0 - std::exp(-params.a * (T - t)))) * params.localvol(t, k);
}

DeliveryRemap::DeliveryRemap(const market::InitialCurve& curve, double a, market::DeliveryPeriod dp)
    : curve_(&curve), a_(a), dp_(std::move(dp)) {
    require(a_ >= 0.0, "DeliveryRemap: mean reversion must be nonnegative");
    dp_.validate();
}

double DeliveryRemap::G(double t) const {
    if (a_ == 0.0) return 1.0;
    const double lo = t + dp_.delta0, hi = t + dp_.delta1;
    const double plain = curve_->integrate(lo, hi, [](double) { return 1.0; });
    const double weighted = curve_->integrate(lo, hi, [&](double u) { return std::exp(-a_ * (u - t)); });
    return weighted / plain;
}

double DeliveryRemap::A(double t) const {
    if (a_ == 0.0) return 0.0;
    const double h = market::kOneDay;
    if (t < h) return a_ - (std::log(G(t + h)) - std::log(G(t))) / h;
    return a_ - (std::log(G(t + h)) - std::log(G(t - h))) / (2.0 * h);
}

double DeliveryRemap::integrated_A(double t, double T) const {
    if (a_ == 0.0) return 0.0;
    return a_ * (T - t) - std::log(G(T)) + std::log(G(t));
}

double spot_delta(double s_t, const DeliveryRemap& remap, double t) { return 1.0 - (1.0 - s_t) * remap.G(t); }

namespace {

double eta_delta_given(const VolFunction& eta, double g, double t, double k) {
    if (!(k > 1.0 - g)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "k = %g at or below 1 - G = %g", k, 1.0 - g);
        throw Error(ErrorCode::BelowSupport, buf);
    }
    return (1.0 - (1.0 - g) / k) * eta(t, 1.0 - (1.0 - k) / g);
}

} // namespace

double eta_delta(const ModelParams& params, const DeliveryRemap& remap, double t, double k) {
    return eta_delta_given([&](double u, double x) { return params.localvol(u, x); }, remap.G(t), t, k);
}

double link_smiles(const VolFunction& eta_src, const DeliveryRemap& src, const DeliveryRemap& dst, double t, double k) {
    const double g_src = src.G(t), g_dst = dst.G(t);
    if (!(k > 1.0 - g_dst)) throw Error(ErrorCode::BelowSupport, "link_smiles: k below destination support");
    // Level of the source period that shares the spot value with k.
    const double k_src = 1.0 - (1.0 - k) * g_src / g_dst;
    const double spot_vol = eta_src(t, k_src) / (1.0 - (1.0 - g_src) / k_src);
    return (1.0 - (1.0 - g_dst) / k) * spot_vol;
}

double link_smiles(const ModelParams& params, const DeliveryRemap& src, const DeliveryRemap& dst, double t, double k) {
    return link_smiles([&](double u, double x) { return eta_delta(params, src, u, x); }, src, dst, t, k);
}

double period_futures_closed_form(double s_t, double t, double T, const DeliveryRemap& remap, double F0Tdelta) {
    require(t <= T, "period_futures_closed_form: t must not exceed T");
    return F0Tdelta * (1.0 - (1.0 - spot_delta(s_t, remap, t)) * std::exp(-remap.integrated_A(t, T)));
}

} // namespace swing::lv
