#include "swing/market/quotes.hpp"

#include "swing/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swing::market {

void VanillaQuote::validate() const {
    delivery.validate();
    if (!(implied_vol > 0.0)) throw Error(ErrorCode::InvalidArgument, "implied_vol must be positive");
    if (!(strike > 0.0)) throw Error(ErrorCode::InvalidArgument, "strike must be positive");
    if (!(option_expiry > 0.0)) throw Error(ErrorCode::InvalidArgument, "option expiry must be after valuation");
    if (option_expiry > futures_maturity + 1e-12)
        throw Error(ErrorCode::InvalidArgument, "option expiry after futures maturity");
    const bool same = std::abs(option_expiry - futures_maturity) < 1e-9;
    if (kind == OptionKind::PVO && !same) throw Error(ErrorCode::InvalidArgument, "PVO must expire at maturity");
    if (kind == OptionKind::MCO && same) throw Error(ErrorCode::InvalidArgument, "MCO must expire before maturity");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

std::string date_of(const Date& valuation, double t) {
    return format_iso_date(add_days(valuation, static_cast<int>(std::lround(t * kDaysPerYear))));
}

} // namespace

std::vector<VanillaQuote> load_quotes(const std::string& path, const Date& valuation_date) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open quote file " + path);
    static const std::string header = "kind,option_expiry,futures_maturity,delivery_start,delivery_end,strike,implied_vol";
    std::vector<VanillaQuote> quotes;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != header)
                throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": expected header '" + header + "'");
            header_seen = true;
            continue;
        }
        try {
            const auto cells = split_csv(line);
            if (cells.size() != 7) throw Error(ErrorCode::InvalidArgument, "expected 7 columns");
            VanillaQuote q;
            if (cells[0] == "PVO") q.kind = OptionKind::PVO;
            else if (cells[0] == "MCO") q.kind = OptionKind::MCO;
            else throw Error(ErrorCode::InvalidArgument, "unknown kind '" + cells[0] + "'");
            const Date expiry = parse_iso_date(cells[1]);
            const Date maturity = parse_iso_date(cells[2]);
            const Date start = parse_iso_date(cells[3]);
            const Date end = parse_iso_date(cells[4]);
            q.option_expiry = year_fraction(valuation_date, expiry);
            q.futures_maturity = year_fraction(valuation_date, maturity);
            q.delivery.delta0 = year_fraction(maturity, start);
            q.delivery.delta1 = year_fraction(maturity, end) + kOneDay;
            q.delivery.label = std::to_string(days_between(start, end) + 1) + "d";
            q.strike = std::stod(cells[5]);
            q.implied_vol = std::stod(cells[6]);
            q.validate();
            quotes.push_back(q);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return quotes;
}

void write_quotes(const std::string& path, const std::vector<VanillaQuote>& quotes, const Date& valuation_date) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "kind,option_expiry,futures_maturity,delivery_start,delivery_end,strike,implied_vol\n";
    char buf[64];
    for (const auto& q : quotes) {
        const double start = q.futures_maturity + q.delivery.delta0;
        const double last = q.futures_maturity + q.delivery.delta1 - kOneDay;
        out << (q.kind == OptionKind::PVO ? "PVO" : "MCO") << ',' << date_of(valuation_date, q.option_expiry) << ','
            << date_of(valuation_date, q.futures_maturity) << ',' << date_of(valuation_date, start) << ','
            << date_of(valuation_date, last) << ',';
        std::snprintf(buf, sizeof buf, "%.10g,%.12g", q.strike, q.implied_vol);
        out << buf << '\n';
    }
}

double SmileShape::operator()(double expiry, double moneyness) const {
    const double x = std::log(moneyness);
    return atm + skew * x + curvature * x * x + term_slope * (expiry - 1.0);
}

std::vector<VanillaQuote> synth_quotes(const InitialCurve& curve, const SynthSpec& spec) {
    std::vector<VanillaQuote> out;
    out.reserve(spec.expiries.size() * spec.moneyness.size());
    for (double expiry : spec.expiries) {
        const double fwd = period_futures(curve, expiry, spec.delivery);
        for (double m : spec.moneyness) {
            VanillaQuote q;
            q.kind = OptionKind::PVO;
            q.option_expiry = expiry;
            q.futures_maturity = expiry;
            q.delivery = spec.delivery;
            q.strike = m * fwd;
            q.implied_vol = spec.smile(expiry, m);
            q.validate();
            out.push_back(q);
        }
    }
    return out;
}

} // namespace swing::market
