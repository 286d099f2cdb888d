#pragma once

#include "swing/lv/local_vol.hpp"
#include "swing/market/curve.hpp"
#include "swing/market/quotes.hpp"

#include <vector>

namespace swing::calib {

/// Synthetic TTF-like market as seen on 2018-03-29: a seasonal daily curve
/// around 20 EUR/MWh, one-month futures whose last trading date is two days
/// before delivery, and a smiley reference local vol.
market::Date synthetic_valuation_date();
market::InitialCurve synthetic_curve();

/// Last trading date (year fraction) and delivery period of the one-month
/// futures delivering in `month` (1..12) of `year`.
struct MonthlyFutures {
    std::string label;
    double maturity;
    market::DeliveryPeriod delivery;
};
MonthlyFutures monthly_futures(int year, unsigned month);

/// JUN18, JUL18, OCT18, JAN19, APR19.
std::vector<MonthlyFutures> synthetic_expiries();
/// 11 moneyness levels from 0.7 to 1.3.
std::vector<double> synthetic_moneyness();

/// 5 x 11 PVO templates (implied_vol left at a placeholder).
std::vector<market::VanillaQuote> pvo_templates(const market::InitialCurve& curve);
/// ATM MCO on each futures after the first, expiring at the previous
/// futures' last trading date.
std::vector<market::VanillaQuote> mco_templates(const market::InitialCurve& curve);

/// Smiley spot local vol used to generate the synthetic market.
lv::LocalVolSurface reference_local_vol();

} // namespace swing::calib
