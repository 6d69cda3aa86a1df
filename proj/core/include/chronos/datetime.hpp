#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace chronos {

/// All datetimes in chronos are UTC with second precision.
using UtcTime = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

/// Parses a datetime string into UTC seconds. Accepted forms:
///   2024-02-15T10:00:00Z   2024-02-15T10:00:00+02:00   2024-02-15 10:00:00
///   2024-02-15T10:00       2024-02-15                  2024/02/15
///   2023/05/20 (Sat) 02:21   (benchmark session timestamps)
/// Strings without a zone designator are treated as UTC. Fractional
/// seconds are truncated.
std::optional<UtcTime> parse_datetime(std::string_view text);

/// Parses a calendar date (YYYY-MM-DD or YYYY/MM/DD, datetime prefixes allowed).
std::optional<Date> parse_date(std::string_view text);

std::string format_datetime(UtcTime t);  // "2024-02-15T10:00:00Z"
std::string format_date(Date d);         // "2024-02-15"

UtcTime day_start(Date d);  // 00:00:00
UtcTime day_end(Date d);    // 23:59:59, intervals are closed
Date date_of(UtcTime t);

Date add_days(Date d, int n);
/// Calendar month arithmetic; day-of-month clamps to the target month's length.
Date add_months(Date d, int n);
Date month_first(Date d);
Date month_last(Date d);
Date year_first(Date d);
Date year_last(Date d);
/// Monday of the ISO week containing d.
Date week_monday(Date d);
/// 1 = Monday .. 7 = Sunday.
unsigned iso_weekday(Date d);

}  // namespace chronos
