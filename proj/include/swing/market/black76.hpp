#pragma once

namespace swing::market {

double normal_cdf(double x);
double normal_pdf(double x);

/// Discounted Black-76 call: df * (F N(d1) - K N(d2)). Zero vol or zero
/// expiry gives the discounted intrinsic value.
double black76_call(double forward, double strike, double vol, double expiry, double df);
double black76_put(double forward, double strike, double vol, double expiry, double df);
double black76_vega(double forward, double strike, double vol, double expiry, double df);

/// Black-76 implied volatility of a call price. Bracketing bisection followed
/// by a Newton polish until |call(vol) - price| <= 1e-12 F. A price equal to
/// the discounted intrinsic returns 0; prices outside [df (F-K)^+, df F)
/// throw OutOfBoundsPrice.
double implied_vol(double price, double forward, double strike, double expiry, double df);

} // namespace swing::market
