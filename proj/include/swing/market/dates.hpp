#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace swing::market {

using Date = std::chrono::year_month_day;

inline constexpr double kDaysPerYear = 365.0;
inline constexpr double kOneDay = 1.0 / kDaysPerYear;

/// Parses `YYYY-MM-DD`. Throws MalformedRow-free InvalidArgument on bad input;
/// callers that know the line number rethrow with it.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& d);

/// ACT/365 fixed year fraction.
double year_fraction(const Date& from, const Date& to);
Date add_days(const Date& d, int days);
int days_between(const Date& from, const Date& to);

} // namespace swing::market
