#include "swing/market/curve.hpp"

#include "swing/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace swing::market {

void DeliveryPeriod::validate() const {
    if (!(delta0 >= 0.0 && delta1 > delta0))
        throw Error(ErrorCode::InvalidArgument, "delivery period must satisfy 0 <= delta0 < delta1");
}

DeliveryPeriod DeliveryPeriod::days(int start_offset, int n_days, std::string label) {
    DeliveryPeriod dp{start_offset * kOneDay, (start_offset + n_days) * kOneDay, std::move(label)};
    dp.validate();
    return dp;
}

DeliveryPeriod DeliveryPeriod::from_label(const std::string& label, double delta0) {
    if (label.size() < 2) throw Error(ErrorCode::InvalidArgument, "bad delivery label '" + label + "'");
    const char unit = label.back();
    int n = 0;
    try {
        n = std::stoi(label.substr(0, label.size() - 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad delivery label '" + label + "'");
    }
    double length = 0.0;
    if (unit == 'd') length = n * kOneDay;
    else if (unit == 'm') length = n / 12.0;
    else if (unit == 'y') length = n;
    else throw Error(ErrorCode::InvalidArgument, "bad delivery label '" + label + "'");
    DeliveryPeriod dp{delta0, delta0 + length, label};
    dp.validate();
    return dp;
}

InitialCurve::InitialCurve(Date valuation_date, std::vector<CurvePillar> pillars, double end)
    : valuation_date_(valuation_date), pillars_(std::move(pillars)), end_(end) {
    require(!pillars_.empty(), "InitialCurve: needs at least one pillar");
    require(pillars_.front().time >= 0.0, "InitialCurve: pillar times must be nonnegative");
    for (std::size_t i = 0; i < pillars_.size(); ++i) {
        require(pillars_[i].level > 0.0, "InitialCurve: levels must be strictly positive");
        if (i > 0) require(pillars_[i].time > pillars_[i - 1].time, "InitialCurve: pillar times must increase");
    }
    require(end_ > pillars_.back().time, "InitialCurve: support end must follow the last pillar");
    // Flat backward extrapolation to t = 0 is expressed by moving the first pillar.
    pillars_.front().time = 0.0;
}

InitialCurve InitialCurve::flat(double level, double horizon, Date valuation_date) {
    return InitialCurve(valuation_date, {{0.0, level}}, horizon);
}

double InitialCurve::instantaneous(double t) const {
    check_support(t);
    auto it = std::upper_bound(pillars_.begin(), pillars_.end(), t,
                               [](double u, const CurvePillar& p) { return u < p.time; });
    return it == pillars_.begin() ? pillars_.front().level : std::prev(it)->level;
}

InitialCurve InitialCurve::scaled(double factor) const {
    auto p = pillars_;
    for (auto& x : p) x.level *= factor;
    return InitialCurve(valuation_date_, std::move(p), end_);
}

void InitialCurve::check_support(double u) const {
    if (u > end_ + 1e-12) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "t=%.6f beyond curve support %.6f", u, end_);
        throw Error(ErrorCode::HorizonExceeded, buf);
    }
}

double period_futures(const InitialCurve& curve, double maturity, const DeliveryPeriod& dp) {
    dp.validate();
    const double lo = maturity + dp.delta0;
    const double hi = maturity + dp.delta1;
    return curve.integrate(lo, hi, [](double) { return 1.0; }) / dp.length();
}

DiscountCurve::DiscountCurve(std::vector<std::pair<double, double>> zero_yields) {
    require(!zero_yields.empty(), "DiscountCurve: needs pillars");
    double prev_t = 0.0, prev_ld = 0.0;
    for (const auto& [t, y] : zero_yields) {
        require(t > prev_t, "DiscountCurve: pillar times must increase");
        const double ld = -y * t;
        require(ld <= prev_ld + 1e-15, "DiscountCurve: discount factors must be nonincreasing");
        times_.push_back(t);
        log_discount_.push_back(ld);
        prev_t = t;
        prev_ld = ld;
    }
}

double DiscountCurve::discount(double t) const {
    if (times_.empty() || t <= 0.0) return 1.0;
    if (t >= times_.back()) {
        // flat forward beyond the last pillar
        const std::size_t n = times_.size();
        const double t0 = n > 1 ? times_[n - 2] : 0.0;
        const double l0 = n > 1 ? log_discount_[n - 2] : 0.0;
        const double fwd = (log_discount_[n - 1] - l0) / (times_[n - 1] - t0);
        return std::exp(log_discount_[n - 1] + fwd * (t - times_[n - 1]));
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const double t0 = i == 0 ? 0.0 : times_[i - 1];
    const double l0 = i == 0 ? 0.0 : log_discount_[i - 1];
    const double w = (t - t0) / (times_[i] - t0);
    return std::exp(l0 + w * (log_discount_[i] - l0));
}

InitialCurve load_curve_csv(const std::string& path, const Date& valuation_date) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open curve file " + path);
    std::string line;
    int line_no = 0;
    std::vector<CurvePillar> pillars;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("date,price", 0) != 0)
                throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": expected header 'date,price'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "missing column");
            const Date d = parse_iso_date(line.substr(0, comma));
            const double level = std::stod(line.substr(comma + 1));
            if (!(level > 0.0)) throw Error(ErrorCode::InvalidArgument, "nonpositive price");
            const double t = year_fraction(valuation_date, d);
            if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "date before valuation date");
            if (!pillars.empty() && t <= pillars.back().time)
                throw Error(ErrorCode::InvalidArgument, "dates must be strictly increasing");
            pillars.push_back({t, level});
        } catch (const std::exception& e) {
            throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (pillars.empty()) throw Error(ErrorCode::MalformedRow, path + ": no curve rows");
    const double end = pillars.back().time + kOneDay;
    return InitialCurve(valuation_date, std::move(pillars), end);
}

void write_curve_csv(const std::string& path, const InitialCurve& curve) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "date,price\n";
    char buf[64];
    for (const auto& p : curve.pillars()) {
        const int day = static_cast<int>(std::lround(p.time * kDaysPerYear));
        std::snprintf(buf, sizeof buf, "%.10g", p.level);
        out << format_iso_date(add_days(curve.valuation_date(), day)) << ',' << buf << '\n';
    }
}

} // namespace swing::market
