#pragma once

// The temporal-resolution oracle suite: several hundred (expression, reference)
// pairs whose expected ranges are computed with the independent civil-calendar
// arithmetic in oracles.hpp, never with chronos's own date functions. Both the
// unit tests and the acceptance gate run it.

#include <chronos/datetime.hpp>
#include <chronos/temporal_resolver.hpp>

#include "oracles.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace resolver_suite {

struct Result {
    int total = 0;
    std::vector<std::string> failures;
};

namespace detail {

struct Expected {
    std::int64_t start_s;
    std::int64_t end_s;
    chronos::Granularity granularity;
};

inline std::int64_t epoch_s(chronos::UtcTime t) { return t.time_since_epoch().count(); }

inline void check_one(Result& out, const chronos::TemporalResolver& resolver,
                      const std::string& expression, chronos::UtcTime ref,
                      std::optional<chronos::DatetimeRange> anchor, const Expected& want) {
    ++out.total;
    auto expr = resolver.classify(expression, anchor);
    if (!expr) {
        out.failures.push_back("\"" + expression + "\": not classified");
        return;
    }
    chronos::DatetimeRange got = resolver.resolve(*expr, ref);
    if (epoch_s(got.start) != want.start_s || epoch_s(got.end) != want.end_s ||
        got.granularity != want.granularity) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "\"%s\" @%s: got [%s .. %s] %s, want [%lld .. %lld] %s",
                      expression.c_str(), chronos::format_datetime(ref).c_str(),
                      chronos::format_datetime(got.start).c_str(),
                      chronos::format_datetime(got.end).c_str(),
                      chronos::to_string(got.granularity).c_str(),
                      static_cast<long long>(want.start_s), static_cast<long long>(want.end_s),
                      chronos::to_string(want.granularity).c_str());
        out.failures.push_back(buf);
    }
}

inline Expected whole_day(const oracle::CivilDate& c) {
    return {oracle::day_start_s(c), oracle::day_end_s(c), chronos::Granularity::day};
}

inline Expected from_interval(const oracle::Interval& iv, chronos::Granularity g) {
    return {iv.start, iv.end, g};
}

}  // namespace detail

inline Result run() {
    using namespace chronos;
    using namespace detail;
    using oracle::CivilDate;

    Result out;
    const TemporalResolver& resolver = TemporalResolver::built_in();

    struct Ref {
        CivilDate date;
        std::int64_t tod;  // seconds past midnight
    };
    const Ref refs[] = {
        {{2024, 2, 15}, 10 * 3600 + 30 * 60 + 45},
        {{2024, 2, 29}, 23 * 3600 + 59 * 60 + 59},
        {{2023, 1, 1}, 0},
        {{2024, 12, 31}, 23 * 3600 + 1},
        {{2021, 3, 14}, 9 * 3600 + 26 * 60 + 53},
        {{2020, 6, 30}, 15 * 3600},
        {{2024, 1, 1}, 1},
        {{2019, 7, 4}, 17 * 3600 + 45 * 60},
    };

    // ---- explicit dates and datetimes (reference-independent) ----
    {
        const UtcTime ref{std::chrono::seconds{oracle::day_start_s({2024, 6, 1}) + 43200}};

        const std::pair<const char*, CivilDate> day_cases[] = {
            {"2024-03-05", {2024, 3, 5}},
            {"2024-3-5", {2024, 3, 5}},
            {"2024/03/05", {2024, 3, 5}},
            {"2024/3/5", {2024, 3, 5}},
            {"March 5, 2024", {2024, 3, 5}},
            {"March 5th, 2024", {2024, 3, 5}},
            {"Mar 5 2024", {2024, 3, 5}},
            {"Mar. 5, 2024", {2024, 3, 5}},
            {"march 5 2024", {2024, 3, 5}},
            {"5 March 2024", {2024, 3, 5}},
            {"5th of March 2024", {2024, 3, 5}},
            {"22nd of September 2023", {2023, 9, 22}},
            {"Sept 22, 2023", {2023, 9, 22}},
            {"Sep 22 2023", {2023, 9, 22}},
            {"1st of January 2020", {2020, 1, 1}},
            {"December 31st, 2021", {2021, 12, 31}},
            {"Feb 29, 2024", {2024, 2, 29}},
            {"I met her on March 5, 2024 in town", {2024, 3, 5}},
            {"the delivery arrived 2023-11-07 in the evening", {2023, 11, 7}},
        };
        for (const auto& [text, day] : day_cases)
            check_one(out, resolver, text, ref, std::nullopt, whole_day(day));

        const std::pair<const char*, CivilDate> month_cases[] = {
            {"March 2024", {2024, 3, 1}},
            {"February 2023", {2023, 2, 1}},
            {"Dec 2021", {2021, 12, 1}},
            {"september 2019", {2019, 9, 1}},
        };
        for (const auto& [text, day] : month_cases)
            check_one(out, resolver, text, ref, std::nullopt,
                      from_interval(oracle::month_of(day), Granularity::month));

        struct InstantCase {
            const char* text;
            CivilDate day;
            std::int64_t tod;
        };
        const InstantCase instant_cases[] = {
            {"2024-03-05T14:30:00Z", {2024, 3, 5}, 14 * 3600 + 30 * 60},
            {"2024-03-05T14:30:00", {2024, 3, 5}, 14 * 3600 + 30 * 60},
            {"2024-03-05 14:30:00", {2024, 3, 5}, 14 * 3600 + 30 * 60},
            {"2024-03-05T14:30", {2024, 3, 5}, 14 * 3600 + 30 * 60},
            {"2024-03-05T14:30:07Z", {2024, 3, 5}, 14 * 3600 + 30 * 60 + 7},
            {"2024-03-05T14:30:00+02:00", {2024, 3, 5}, 12 * 3600 + 30 * 60},
            {"2024-03-05T14:30:00-0330", {2024, 3, 5}, 18 * 3600},
            {"2016-06-15T08:00:00z", {2016, 6, 15}, 8 * 3600},
            {"meeting at 2024-03-05T14:30:00Z sharp", {2024, 3, 5}, 14 * 3600 + 30 * 60},
        };
        for (const auto& c : instant_cases) {
            std::int64_t s = oracle::day_start_s(c.day) + c.tod;
            check_one(out, resolver, c.text, ref, std::nullopt,
                      {s, s, Granularity::instant});
        }
    }

    // ---- relative, calendar, ambiguous, anchored: per reference ----
    for (const Ref& r : refs) {
        const CivilDate c = r.date;
        const std::int64_t ref_s = oracle::day_start_s(c) + r.tod;
        const UtcTime ref{std::chrono::seconds{ref_s}};

        // day offsets
        check_one(out, resolver, "yesterday", ref, std::nullopt,
                  whole_day(oracle::add_days(c, -1)));
        check_one(out, resolver, "I saw it today", ref, std::nullopt, whole_day(c));
        check_one(out, resolver, "tonight", ref, std::nullopt, whole_day(c));
        check_one(out, resolver, "this morning", ref, std::nullopt, whole_day(c));
        check_one(out, resolver, "tomorrow", ref, std::nullopt,
                  whole_day(oracle::add_days(c, 1)));

        // count-unit-ago
        check_one(out, resolver, "a day ago", ref, std::nullopt,
                  whole_day(oracle::add_days(c, -1)));
        check_one(out, resolver, "2 days ago", ref, std::nullopt,
                  whole_day(oracle::add_days(c, -2)));
        check_one(out, resolver, "14 days ago", ref, std::nullopt,
                  whole_day(oracle::add_days(c, -14)));
        check_one(out, resolver, "a week ago", ref, std::nullopt,
                  from_interval(oracle::week_of(oracle::add_days(c, -7)), Granularity::week));
        check_one(out, resolver, "three weeks ago", ref, std::nullopt,
                  from_interval(oracle::week_of(oracle::add_days(c, -21)), Granularity::week));
        check_one(out, resolver, "bought it a month ago", ref, std::nullopt,
                  from_interval(oracle::month_of(oracle::add_months(c, -1)),
                                Granularity::month));
        check_one(out, resolver, "6 months ago", ref, std::nullopt,
                  from_interval(oracle::month_of(oracle::add_months(c, -6)),
                                Granularity::month));
        check_one(out, resolver, "twelve months ago", ref, std::nullopt,
                  from_interval(oracle::month_of(oracle::add_months(c, -12)),
                                Granularity::month));
        check_one(out, resolver, "a year ago", ref, std::nullopt,
                  from_interval(oracle::year_of({c.y - 1, 1, 1}), Granularity::year));
        check_one(out, resolver, "two years ago", ref, std::nullopt,
                  from_interval(oracle::year_of({c.y - 2, 1, 1}), Granularity::year));

        // previous / current calendar units
        check_one(out, resolver, "last week", ref, std::nullopt,
                  from_interval(oracle::week_of(oracle::add_days(oracle::week_monday(c), -7)),
                                Granularity::week));
        check_one(out, resolver, "past week", ref, std::nullopt,
                  from_interval(oracle::week_of(oracle::add_days(oracle::week_monday(c), -7)),
                                Granularity::week));
        check_one(out, resolver, "last month", ref, std::nullopt,
                  from_interval(oracle::month_of(oracle::add_months({c.y, c.m, 1}, -1)),
                                Granularity::month));
        check_one(out, resolver, "last year", ref, std::nullopt,
                  from_interval(oracle::year_of({c.y - 1, 1, 1}), Granularity::year));
        check_one(out, resolver, "this week", ref, std::nullopt,
                  from_interval(oracle::week_of(c), Granularity::week));
        check_one(out, resolver, "this month", ref, std::nullopt,
                  from_interval(oracle::month_of(c), Granularity::month));
        check_one(out, resolver, "this year", ref, std::nullopt,
                  from_interval(oracle::year_of(c), Granularity::year));

        // last <weekday>: most recent strictly prior occurrence
        static const char* weekday_names[] = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                              "Friday", "Saturday", "Sunday"};
        for (int target = 1; target <= 7; ++target) {
            int back = (oracle::iso_weekday(c) + 7 - target) % 7;
            if (back == 0) back = 7;
            check_one(out, resolver, std::string("last ") + weekday_names[target - 1], ref,
                      std::nullopt, whole_day(oracle::add_days(c, -back)));
        }

        // ambiguity policy windows, second precision at the reference's time
        auto window = [&](int a, int b) {
            return Expected{ref_s + a * std::int64_t{86400}, ref_s + b * std::int64_t{86400},
                            Granularity::window};
        };
        check_one(out, resolver, "we spoke recently", ref, std::nullopt, window(-30, 0));
        check_one(out, resolver, "a while ago", ref, std::nullopt, window(-180, -30));
        check_one(out, resolver, "see you soon", ref, std::nullopt, window(0, 14));
        check_one(out, resolver, "these days", ref, std::nullopt, window(-14, 1));

        // anchored relatives against a 6-day window around the reference
        const CivilDate a_start = oracle::add_days(c, -3);
        const CivilDate a_end = oracle::add_days(c, 2);
        const DatetimeRange anchor{
            UtcTime{std::chrono::seconds{oracle::day_start_s(a_start)}},
            UtcTime{std::chrono::seconds{oracle::day_end_s(a_end)}}, Granularity::window};
        const CivilDate after = oracle::add_days(a_end, 1);
        const CivilDate before = oracle::add_days(a_start, -1);

        check_one(out, resolver, "the day after", ref, anchor, whole_day(after));
        check_one(out, resolver, "the week after", ref, anchor,
                  {oracle::day_start_s(after), oracle::day_end_s(oracle::add_days(after, 6)),
                   Granularity::week});
        check_one(out, resolver, "the month right after", ref, anchor,
                  {oracle::day_start_s(after),
                   oracle::day_end_s(oracle::add_days(oracle::add_months(after, 1), -1)),
                   Granularity::month});
        check_one(out, resolver, "the year after", ref, anchor,
                  {oracle::day_start_s(after),
                   oracle::day_end_s(oracle::add_days(oracle::add_months(after, 12), -1)),
                   Granularity::year});
        check_one(out, resolver, "the day just before", ref, anchor, whole_day(before));
        check_one(out, resolver, "week before", ref, anchor,
                  {oracle::day_start_s(oracle::add_days(before, -6)),
                   oracle::day_end_s(before), Granularity::week});
        check_one(out, resolver, "the month before", ref, anchor,
                  {oracle::day_start_s(oracle::add_days(oracle::add_months(before, -1), 1)),
                   oracle::day_end_s(before), Granularity::month});
        check_one(out, resolver, "the year before", ref, anchor,
                  {oracle::day_start_s(oracle::add_days(oracle::add_months(before, -12), 1)),
                   oracle::day_end_s(before), Granularity::year});
    }

    return out;
}

}  // namespace resolver_suite
