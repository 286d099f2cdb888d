#pragma once

#include "swing/market/dates.hpp"
#include "swing/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace swing::market {

struct CurvePillar {
    double time;  // ACT/365 year fraction from the valuation date
    double level; // EUR/MWh
};

/// Delivery window [T + delta0, T + delta1] relative to a futures maturity T.
struct DeliveryPeriod {
    double delta0 = 0.0;
    double delta1 = kOneDay;
    std::string label = "1d";

    double length() const noexcept { return delta1 - delta0; }
    void validate() const;

    static DeliveryPeriod days(int start_offset, int n_days, std::string label);
    /// Parses tenor labels "<n>d" (n/365) or "<n>m" (n/12) starting at `delta0`.
    static DeliveryPeriod from_label(const std::string& label, double delta0 = 0.0);
};

/// Today's instantaneous futures curve f_0(t), piecewise flat between pillars:
/// f_0(t) = level_i on [t_i, t_{i+1}), the last pillar extending to `end`.
/// Times before the first pillar take the first level.
class InitialCurve {
public:
    InitialCurve(Date valuation_date, std::vector<CurvePillar> pillars, double end);

    static InitialCurve flat(double level, double horizon, Date valuation_date = Date{});
    /// Daily-flat representation of a smooth curve: each day carries the
    /// average of `f` over that day (8-point Gauss-Legendre).
    template <class F>
    static InitialCurve daily_from_function(F&& f, int n_days, Date valuation_date = Date{}) {
        std::vector<CurvePillar> pillars;
        pillars.reserve(static_cast<std::size_t>(n_days));
        for (int d = 0; d < n_days; ++d) {
            const double t0 = d * kOneDay, t1 = (d + 1) * kOneDay;
            pillars.push_back({t0, numerics::gauss_legendre8(f, t0, t1) / kOneDay});
        }
        return InitialCurve(valuation_date, std::move(pillars), n_days * kOneDay);
    }

    double operator()(double t) const { return instantaneous(t); }
    double instantaneous(double t) const;

    const Date& valuation_date() const noexcept { return valuation_date_; }
    const std::vector<CurvePillar>& pillars() const noexcept { return pillars_; }
    double support_end() const noexcept { return end_; }

    /// \int_{u0}^{u1} f_0(u) weight(u) du, split at pillar breaks and daily
    /// sub-cells, each integrated with 8-point Gauss-Legendre. Exact for the
    /// flat curve times any polynomial weight up to degree fifteen per cell.
    template <class W>
    double integrate(double u0, double u1, W&& weight) const {
        check_support(u1);
        double total = 0.0;
        auto it = std::upper_bound(pillars_.begin(), pillars_.end(), u0,
                                   [](double u, const CurvePillar& p) { return u < p.time; });
        std::size_t cell = it == pillars_.begin() ? 0 : static_cast<std::size_t>(it - pillars_.begin()) - 1;
        double lo = u0;
        while (lo < u1) {
            const double cell_end = cell + 1 < pillars_.size() ? pillars_[cell + 1].time : end_;
            const double hi = std::min(u1, cell_end);
            const double level = pillars_[cell].level;
            if (hi > lo) {
                const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / kOneDay - 1e-9)));
                const double step = (hi - lo) / pieces;
                double acc = 0.0;
                for (int p = 0; p < pieces; ++p)
                    acc += numerics::gauss_legendre8(weight, lo + p * step, lo + (p + 1) * step);
                total += level * acc;
            }
            lo = hi;
            if (cell + 1 < pillars_.size()) ++cell;
            else break;
        }
        return total;
    }

    /// A copy with every level multiplied by `factor`.
    InitialCurve scaled(double factor) const;

private:
    void check_support(double u) const;

    Date valuation_date_;
    std::vector<CurvePillar> pillars_;
    double end_;
};

/// F_0(T, delta): the delivery-weighted average of the instantaneous curve.
double period_futures(const InitialCurve& curve, double maturity, const DeliveryPeriod& dp);

/// Deterministic zero-yield discounting. With zero rates every P is one.
class DiscountCurve {
public:
    DiscountCurve() = default; // zero rates
    /// Pillars of (time, continuously compounded zero yield). Log-discount is
    /// interpolated linearly, i.e. piecewise-flat forward rates.
    explicit DiscountCurve(std::vector<std::pair<double, double>> zero_yields);

    static DiscountCurve zero_rates() { return DiscountCurve{}; }
    static DiscountCurve flat(double yield) { return DiscountCurve({{1.0, yield}}); }

    bool is_zero_rates() const noexcept { return times_.empty(); }
    double discount(double t) const;

private:
    std::vector<double> times_;
    std::vector<double> log_discount_; // -y(t) t at pillars
};

InitialCurve load_curve_csv(const std::string& path, const Date& valuation_date);
void write_curve_csv(const std::string& path, const InitialCurve& curve);

} // namespace swing::market
