#include "swing/market/black76.hpp"

#include "swing/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace swing::market {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

void check_inputs(double forward, double strike, double vol, double expiry, double df) {
    if (!(forward > 0.0) || !(strike >= 0.0) || !(vol >= 0.0) || !(expiry >= 0.0) || !(df > 0.0 && df <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "black76: precondition violated");
}

} // namespace

double black76_call(double forward, double strike, double vol, double expiry, double df) {
    check_inputs(forward, strike, vol, expiry, df);
    const double sd = vol * std::sqrt(expiry);
    if (sd == 0.0 || strike == 0.0) return df * std::max(forward - strike, 0.0);
    const double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    return df * (forward * normal_cdf(d1) - strike * normal_cdf(d2));
}

double black76_put(double forward, double strike, double vol, double expiry, double df) {
    return black76_call(forward, strike, vol, expiry, df) - df * (forward - strike);
}

double black76_vega(double forward, double strike, double vol, double expiry, double df) {
    check_inputs(forward, strike, vol, expiry, df);
    const double sd = vol * std::sqrt(expiry);
    if (sd == 0.0 || strike == 0.0) return 0.0;
    const double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    return df * forward * normal_pdf(d1) * std::sqrt(expiry);
}

double implied_vol(double price, double forward, double strike, double expiry, double df) {
    check_inputs(forward, strike, 0.0, expiry, df);
    const double lower = df * std::max(forward - strike, 0.0);
    const double upper = df * forward;
    const double tol = 1e-12 * forward;
    if (price < lower - tol || price >= upper || expiry == 0.0) {
        if (expiry == 0.0 && std::abs(price - lower) <= tol) return 0.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "price %.12g outside [%.12g, %.12g) for F=%g K=%g T=%g", price, lower,
                      upper, forward, strike, expiry);
        throw Error(ErrorCode::OutOfBoundsPrice, buf);
    }
    if (price <= lower) return 0.0;

    double lo = 0.0, hi = 1.0;
    while (black76_call(forward, strike, hi, expiry, df) < price) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw Error(ErrorCode::OutOfBoundsPrice, "implied vol above 1000");
    }
    // Bisection to a coarse bracket, then safeguarded Newton.
    for (int i = 0; i < 40 && hi - lo > 1e-4; ++i) {
        const double mid = 0.5 * (lo + hi);
        (black76_call(forward, strike, mid, expiry, df) < price ? lo : hi) = mid;
    }
    double vol = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        const double diff = black76_call(forward, strike, vol, expiry, df) - price;
        if (std::abs(diff) <= tol) return vol;
        (diff < 0.0 ? lo : hi) = vol;
        const double vega = black76_vega(forward, strike, vol, expiry, df);
        double next = vega > 0.0 ? vol - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15) return next;
        vol = next;
    }
    return vol;
}

} // namespace swing::market
