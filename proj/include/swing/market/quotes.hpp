#pragma once

#include "swing/market/curve.hpp"

#include <string>
#include <vector>

namespace swing::market {

enum class OptionKind { PVO, MCO };

/// A Black-76 implied-vol quote on a futures contract. PVO expire on the
/// futures' last trading date; MCO strictly before it.
struct VanillaQuote {
    OptionKind kind = OptionKind::PVO;
    double option_expiry = 0.0;
    double futures_maturity = 0.0;
    DeliveryPeriod delivery;
    double strike = 0.0;
    double implied_vol = 0.0;

    void validate() const;
};

/// Reads the quote CSV:
/// `kind,option_expiry,futures_maturity,delivery_start,delivery_end,strike,implied_vol`
/// with ISO dates. `delivery_end` is the last delivery day (inclusive).
std::vector<VanillaQuote> load_quotes(const std::string& path, const Date& valuation_date);
void write_quotes(const std::string& path, const std::vector<VanillaQuote>& quotes, const Date& valuation_date);

/// Parametric smile used to generate test markets:
/// vol(T, m) = atm + skew ln m + curvature ln^2 m + term_slope (T - 1), m = K / F.
struct SmileShape {
    double atm = 0.2;
    double skew = 0.0;
    double curvature = 0.0;
    double term_slope = 0.0;

    double operator()(double expiry, double moneyness) const;
};

struct SynthSpec {
    std::vector<double> expiries;     // PVO expiries = futures maturities
    std::vector<double> moneyness;    // K / F_0(T, delta)
    DeliveryPeriod delivery = DeliveryPeriod::from_label("1m");
    SmileShape smile;
};

/// Quotes priced under the closed-form reference smile; flat smile when only
/// `atm` is set.
std::vector<VanillaQuote> synth_quotes(const InitialCurve& curve, const SynthSpec& spec);

} // namespace swing::market
