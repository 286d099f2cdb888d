#include "swing/lsmc/reference.hpp"

#include "swing/calib/synthetic.hpp"

#include <cmath>

namespace swing::lsmc {

namespace {
constexpr int kFirstFixingDay = 33; // 2018-05-01 seen from 2018-03-29
}

SwingContract reference_contract(const market::InitialCurve& curve, double C_m, double C_M, SwingMode mode,
                                 int n_days) {
    SwingContract c;
    for (int d = 0; d < n_days; ++d) c.schedule.fixing_times.push_back((kFirstFixingDay + d) * market::kOneDay);
    c.N_m = 0.0;
    c.N_M = 1.0;
    c.C_m = C_m;
    c.C_M = C_M;
    c.mode = mode;
    const auto may = calib::monthly_futures(2018, 5);
    c.strike = market::period_futures(curve, may.maturity, may.delivery);
    return c;
}

SwingContract floating_reference_contract(const market::InitialCurve& curve, double C_m, double C_M, SwingMode mode,
                                          int n_days) {
    auto c = reference_contract(curve, C_m, C_M, mode, n_days);
    const auto may = calib::monthly_futures(2018, 5);
    c.floating_strike = true;
    c.month = {may.maturity, may.delivery};
    const int ltd = static_cast<int>(std::lround(may.maturity / market::kOneDay));
    for (int d = ltd - 19; d <= ltd; ++d) c.schedule.strike_times.push_back(d * market::kOneDay);
    return c;
}

} // namespace swing::lsmc
