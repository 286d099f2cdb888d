#include "swing/calib/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace swing::calib {

using namespace std::chrono;

market::Date synthetic_valuation_date() { return year{2018} / March / 29; }

market::InitialCurve synthetic_curve() {
    const auto seasonal = [](double t) {
        return 20.0 + 2.5 * std::cos(2.0 * std::numbers::pi * (t - 0.8)) + 0.4 * t;
    };
    return market::InitialCurve::daily_from_function(seasonal, 3 * 365 + 60, synthetic_valuation_date());
}

MonthlyFutures monthly_futures(int y, unsigned m) {
    static const char* names[] = {"JAN", "FEB", "MAR", "APR", "MAY", "JUN", "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};
    const market::Date start = year{y} / month{m} / 1;
    const year_month next_month = year_month{year{y}, month{m}} + months{1};
    const market::Date next = next_month / 1;
    const market::Date ltd = market::add_days(start, -2);
    const int days = market::days_between(start, next);
    MonthlyFutures f;
    f.label = std::string(names[m - 1]) + std::to_string(y % 100);
    f.maturity = market::year_fraction(synthetic_valuation_date(), ltd);
    f.delivery = market::DeliveryPeriod::days(2, days, "1m");
    return f;
}

std::vector<MonthlyFutures> synthetic_expiries() {
    return {monthly_futures(2018, 6), monthly_futures(2018, 7), monthly_futures(2018, 10), monthly_futures(2019, 1),
            monthly_futures(2019, 4)};
}

std::vector<double> synthetic_moneyness() {
    std::vector<double> m;
    for (int i = 0; i < 11; ++i) m.push_back(0.7 + 0.06 * i);
    return m;
}

std::vector<market::VanillaQuote> pvo_templates(const market::InitialCurve& curve) {
    std::vector<market::VanillaQuote> out;
    for (const auto& f : synthetic_expiries()) {
        const double F0 = market::period_futures(curve, f.maturity, f.delivery);
        for (double m : synthetic_moneyness())
            out.push_back({market::OptionKind::PVO, f.maturity, f.maturity, f.delivery, m * F0, 0.3});
    }
    return out;
}

std::vector<market::VanillaQuote> mco_templates(const market::InitialCurve& curve) {
    std::vector<market::VanillaQuote> out;
    const auto fs = synthetic_expiries();
    for (std::size_t i = 1; i < fs.size(); ++i) {
        const double F0 = market::period_futures(curve, fs[i].maturity, fs[i].delivery);
        out.push_back({market::OptionKind::MCO, fs[i - 1].maturity, fs[i].maturity, fs[i].delivery, F0, 0.3});
    }
    return out;
}

lv::LocalVolSurface reference_local_vol() {
    const std::vector<double> t = {0.25, 0.5, 1.0, 1.5};
    const std::vector<double> k = {0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.7, 2.2};
    std::vector<double> v;
    for (double ti : t)
        for (double kj : k) {
            const double x = std::log(kj);
            v.push_back((0.42 - 0.06 * ti) * (1.0 + 0.9 * x * x - 0.12 * x));
        }
    return lv::LocalVolSurface(t, k, v);
}

} // namespace swing::calib
