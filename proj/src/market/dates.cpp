#include "swing/market/dates.hpp"

#include "swing/error.hpp"

#include <charconv>
#include <cstdio>

namespace swing::market {

Date parse_iso_date(std::string_view text) {
    auto field = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        const auto* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, v);
        if (ec != std::errc{} || ptr != first + len)
            throw Error(ErrorCode::InvalidArgument, "bad ISO date '" + std::string(text) + "'");
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(ErrorCode::InvalidArgument, "bad ISO date '" + std::string(text) + "'");
    const Date d{std::chrono::year{field(0, 4)}, std::chrono::month{static_cast<unsigned>(field(5, 2))},
                 std::chrono::day{static_cast<unsigned>(field(8, 2))}};
    if (!d.ok()) throw Error(ErrorCode::InvalidArgument, "invalid calendar date '" + std::string(text) + "'");
    return d;
}

std::string format_iso_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

int days_between(const Date& from, const Date& to) {
    return static_cast<int>((std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

double year_fraction(const Date& from, const Date& to) {
    return days_between(from, to) / kDaysPerYear;
}

Date add_days(const Date& d, int days) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

} // namespace swing::market
