#include "chronos/temporal_resolver.hpp"

#include <fstream>
#include <stdexcept>

namespace chronos {

std::string to_string(ExprKind k) {
    switch (k) {
        case ExprKind::explicit_date: return "explicit";
        case ExprKind::relative: return "relative";
        case ExprKind::ambiguous: return "ambiguous";
        case ExprKind::anchored_relative: return "anchored_relative";
    }
    return "explicit";
}

namespace {

std::optional<ExprKind> kind_from_string(const std::string& s) {
    if (s == "explicit") return ExprKind::explicit_date;
    if (s == "relative") return ExprKind::relative;
    if (s == "ambiguous") return ExprKind::ambiguous;
    if (s == "anchored_relative") return ExprKind::anchored_relative;
    return std::nullopt;
}

const char* kMonthNames =
    "january|february|march|april|may|june|july|august|september|october|november|december|"
    "jan|feb|mar|apr|jun|jul|aug|sept|sep|oct|nov|dec";

std::string month_regex() { return std::string("(") + kMonthNames + ")"; }

// The default pattern table. data/temporal_patterns.json carries the same
// content; a test keeps the two in sync.
json default_table() {
    json t = json::array();
    auto add = [&](json row) { t.push_back(std::move(row)); };

    add({{"id", "iso_datetime"},
         {"kind", "explicit"},
         {"rule", "absolute_datetime"},
         {"regex", R"(\b\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}(?::\d{2})?(?:Z|[+-]\d{2}:?\d{2})?)"}});
    add({{"id", "iso_date"},
         {"kind", "explicit"},
         {"rule", "absolute_date"},
         {"regex", R"(\b(\d{4})-(\d{1,2})-(\d{1,2})\b)"}});
    add({{"id", "slash_date"},
         {"kind", "explicit"},
         {"rule", "absolute_date"},
         {"regex", R"(\b(\d{4})/(\d{1,2})/(\d{1,2})\b)"}});
    add({{"id", "month_day_year"},
         {"kind", "explicit"},
         {"rule", "month_day_year"},
         {"regex", "\\b" + month_regex() + R"(\.?\s+(\d{1,2})(?:st|nd|rd|th)?,?\s+(\d{4})\b)"}});
    add({{"id", "day_month_year"},
         {"kind", "explicit"},
         {"rule", "day_month_year"},
         {"regex", R"(\b(\d{1,2})(?:st|nd|rd|th)?\s+(?:of\s+)?)" + month_regex() +
                       R"(\.?,?\s+(\d{4})\b)"}});
    add({{"id", "month_year"},
         {"kind", "explicit"},
         {"rule", "month_year"},
         {"regex", "\\b" + month_regex() + R"(\s+(\d{4})\b)"}});
    add({{"id", "units_ago"},
         {"kind", "relative"},
         {"rule", "count_unit_ago"},
         {"regex",
          R"(\b(\d+|an|a|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve)\s+(day|week|month|year)s?\s+ago\b)"}});
    add({{"id", "yesterday"},
         {"kind", "relative"},
         {"rule", "day_offset"},
         {"offset_days", -1},
         {"regex", R"(\byesterday\b)"}});
    add({{"id", "today"},
         {"kind", "relative"},
         {"rule", "day_offset"},
         {"offset_days", 0},
         {"regex", R"(\b(?:today|tonight|this\s+morning|this\s+afternoon|this\s+evening)\b)"}});
    add({{"id", "tomorrow"},
         {"kind", "relative"},
         {"rule", "day_offset"},
         {"offset_days", 1},
         {"regex", R"(\btomorrow\b)"}});
    add({{"id", "last_week"},
         {"kind", "relative"},
         {"rule", "prev_calendar"},
         {"unit", "week"},
         {"regex", R"(\b(?:last|past)\s+week\b)"}});
    add({{"id", "last_month"},
         {"kind", "relative"},
         {"rule", "prev_calendar"},
         {"unit", "month"},
         {"regex", R"(\b(?:last|past)\s+month\b)"}});
    add({{"id", "last_year"},
         {"kind", "relative"},
         {"rule", "prev_calendar"},
         {"unit", "year"},
         {"regex", R"(\b(?:last|past)\s+year\b)"}});
    add({{"id", "this_week"},
         {"kind", "relative"},
         {"rule", "this_calendar"},
         {"unit", "week"},
         {"regex", R"(\bthis\s+week\b)"}});
    add({{"id", "this_month"},
         {"kind", "relative"},
         {"rule", "this_calendar"},
         {"unit", "month"},
         {"regex", R"(\bthis\s+month\b)"}});
    add({{"id", "this_year"},
         {"kind", "relative"},
         {"rule", "this_calendar"},
         {"unit", "year"},
         {"regex", R"(\bthis\s+year\b)"}});
    add({{"id", "last_weekday"},
         {"kind", "relative"},
         {"rule", "last_weekday"},
         {"regex", R"(\blast\s+(monday|tuesday|wednesday|thursday|friday|saturday|sunday)\b)"}});
    add({{"id", "recently"},
         {"kind", "ambiguous"},
         {"rule", "window"},
         {"start_days", -30},
         {"end_days", 0},
         {"regex", R"(\brecently\b)"}});
    add({{"id", "a_while_ago"},
         {"kind", "ambiguous"},
         {"rule", "window"},
         {"start_days", -180},
         {"end_days", -30},
         {"regex", R"(\ba\s+while\s+(?:ago|back)\b)"}});
    add({{"id", "soon"},
         {"kind", "ambiguous"},
         {"rule", "window"},
         {"start_days", 0},
         {"end_days", 14},
         {"regex", R"(\bsoon\b)"}});
    add({{"id", "these_days"},
         {"kind", "ambiguous"},
         {"rule", "window"},
         {"start_days", -14},
         {"end_days", 1},
         {"regex", R"(\bthese\s+days\b)"}});
    add({{"id", "unit_after"},
         {"kind", "anchored_relative"},
         {"rule", "after_anchor"},
         {"regex", R"(\b(?:the\s+)?(day|week|month|year)\s+(?:right\s+)?(?:just\s+)?after\b)"}});
    add({{"id", "unit_before"},
         {"kind", "anchored_relative"},
         {"rule", "before_anchor"},
         {"regex", R"(\b(?:the\s+)?(day|week|month|year)\s+(?:right\s+)?(?:just\s+)?before\b)"}});
    return t;
}

int parse_count(const std::string& word) {
    static const std::pair<const char*, int> words[] = {
        {"a", 1},    {"an", 1},    {"one", 1},  {"two", 2},   {"three", 3}, {"four", 4},
        {"five", 5}, {"six", 6},   {"seven", 7}, {"eight", 8}, {"nine", 9},  {"ten", 10},
        {"eleven", 11}, {"twelve", 12}};
    std::string lc = fold_case(word);
    for (const auto& [w, n] : words)
        if (lc == w) return n;
    return std::atoi(lc.c_str());
}

std::optional<unsigned> parse_month_name(const std::string& word) {
    static const char* prefixes[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                     "jul", "aug", "sep", "oct", "nov", "dec"};
    std::string lc = fold_case(word);
    for (unsigned m = 0; m < 12; ++m)
        if (lc.rfind(prefixes[m], 0) == 0) return m + 1;
    return std::nullopt;
}

std::optional<unsigned> parse_weekday_name(const std::string& word) {
    static const char* names[] = {"monday", "tuesday", "wednesday", "thursday",
                                  "friday", "saturday", "sunday"};
    std::string lc = fold_case(word);
    for (unsigned i = 0; i < 7; ++i)
        if (lc == names[i]) return i + 1;  // iso encoding
    return std::nullopt;
}

DatetimeRange day_range(Date d) { return DatetimeRange::whole_day(d); }

DatetimeRange week_range(Date any_day) {
    Date mon = week_monday(any_day);
    return {day_start(mon), day_end(add_days(mon, 6)), Granularity::week};
}

DatetimeRange month_range(Date any_day) {
    return {day_start(month_first(any_day)), day_end(month_last(any_day)), Granularity::month};
}

DatetimeRange year_range(Date any_day) {
    return {day_start(year_first(any_day)), day_end(year_last(any_day)), Granularity::year};
}

}  // namespace

const TemporalResolver& TemporalResolver::built_in() {
    static const TemporalResolver instance = TemporalResolver::from_json(default_table());
    return instance;
}

TemporalResolver TemporalResolver::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern table " + path);
    json table = json::parse(in);
    return from_json(table);
}

TemporalResolver TemporalResolver::from_json(const json& table) {
    if (!table.is_array()) throw std::runtime_error("pattern table must be a JSON array");
    TemporalResolver r;
    r.table_ = table;
    for (const auto& row : table) {
        Pattern p;
        p.id = row.value("id", "");
        auto kind = kind_from_string(row.value("kind", ""));
        if (!kind) throw std::runtime_error("pattern " + p.id + ": bad kind");
        p.kind = *kind;
        p.rule = row.value("rule", "");
        p.unit = row.value("unit", "");
        p.offset_days = row.value("offset_days", 0);
        p.start_days = row.value("start_days", 0);
        p.end_days = row.value("end_days", 0);
        std::string rx = row.value("regex", "");
        if (rx.empty()) throw std::runtime_error("pattern " + p.id + ": missing regex");
        p.re = std::regex(rx, std::regex::ECMAScript | std::regex::icase);
        r.patterns_.push_back(std::move(p));
    }
    return r;
}

std::optional<TemporalExpression> TemporalResolver::classify(
    const std::string& raw, std::optional<DatetimeRange> anchor) const {
    int best = -1;
    std::smatch best_match;
    for (size_t i = 0; i < patterns_.size(); ++i) {
        std::smatch m;
        if (!std::regex_search(raw, m, patterns_[i].re)) continue;
        if (best < 0 || m.length(0) > best_match.length(0)) {
            best = static_cast<int>(i);
            best_match = m;
        }
    }
    if (best < 0) return std::nullopt;
    const Pattern& p = patterns_[static_cast<size_t>(best)];
    if (p.kind == ExprKind::anchored_relative && !anchor) return std::nullopt;

    TemporalExpression expr;
    expr.raw = raw;
    expr.kind = p.kind;
    expr.anchor = p.kind == ExprKind::anchored_relative ? anchor : std::nullopt;
    expr.pattern_index = best;
    expr.matched = best_match.str(0);
    for (size_t g = 1; g < best_match.size(); ++g) expr.captures.push_back(best_match.str(g));
    return expr;
}

DatetimeRange TemporalResolver::resolve(const TemporalExpression& expr, UtcTime ref) const {
    if (expr.pattern_index < 0 || expr.pattern_index >= static_cast<int>(patterns_.size()))
        return fallback_day(ref);
    const Pattern& p = patterns_[static_cast<size_t>(expr.pattern_index)];
    const Date ref_date = date_of(ref);
    const auto& cap = expr.captures;

    if (p.rule == "absolute_datetime") {
        if (auto t = parse_datetime(expr.matched)) return DatetimeRange::instant(*t);
        return fallback_day(ref);
    }
    if (p.rule == "absolute_date") {
        Date d{std::chrono::year{std::atoi(cap[0].c_str())},
               std::chrono::month{static_cast<unsigned>(std::atoi(cap[1].c_str()))},
               std::chrono::day{static_cast<unsigned>(std::atoi(cap[2].c_str()))}};
        if (!d.ok()) return fallback_day(ref);
        return day_range(d);
    }
    if (p.rule == "month_day_year" || p.rule == "day_month_year") {
        bool month_first_order = p.rule == "month_day_year";
        auto mon = parse_month_name(cap[month_first_order ? 0 : 1]);
        int dom = std::atoi(cap[month_first_order ? 1 : 0].c_str());
        int yr = std::atoi(cap[2].c_str());
        if (!mon) return fallback_day(ref);
        Date d{std::chrono::year{yr}, std::chrono::month{*mon},
               std::chrono::day{static_cast<unsigned>(dom)}};
        if (!d.ok()) return fallback_day(ref);
        return day_range(d);
    }
    if (p.rule == "month_year") {
        auto mon = parse_month_name(cap[0]);
        int yr = std::atoi(cap[1].c_str());
        if (!mon) return fallback_day(ref);
        return month_range(Date{std::chrono::year{yr}, std::chrono::month{*mon},
                                std::chrono::day{1}});
    }
    if (p.rule == "count_unit_ago") {
        int n = parse_count(cap[0]);
        std::string unit = fold_case(cap[1]);
        if (unit == "day") return day_range(add_days(ref_date, -n));
        if (unit == "week") return week_range(add_days(ref_date, -7 * n));
        if (unit == "month") return month_range(add_months(ref_date, -n));
        if (unit == "year") return year_range(add_months(ref_date, -12 * n));
        return fallback_day(ref);
    }
    if (p.rule == "day_offset") return day_range(add_days(ref_date, p.offset_days));
    if (p.rule == "prev_calendar") {
        if (p.unit == "week") return week_range(add_days(week_monday(ref_date), -7));
        if (p.unit == "month") return month_range(add_months(month_first(ref_date), -1));
        if (p.unit == "year") return year_range(add_months(year_first(ref_date), -12));
        return fallback_day(ref);
    }
    if (p.rule == "this_calendar") {
        if (p.unit == "week") return week_range(ref_date);
        if (p.unit == "month") return month_range(ref_date);
        if (p.unit == "year") return year_range(ref_date);
        return fallback_day(ref);
    }
    if (p.rule == "last_weekday") {
        auto target = parse_weekday_name(cap[0]);
        if (!target) return fallback_day(ref);
        unsigned cur = iso_weekday(ref_date);
        int back = static_cast<int>((cur + 7 - *target) % 7);
        if (back == 0) back = 7;  // strictly prior
        return day_range(add_days(ref_date, -back));
    }
    if (p.rule == "window") {
        auto offset = [&](int days) { return ref + std::chrono::hours{24} * days; };
        return {offset(p.start_days), offset(p.end_days), Granularity::window};
    }
    if (p.rule == "after_anchor" && expr.anchor) {
        std::string unit = fold_case(cap[0]);
        Date start = add_days(date_of(expr.anchor->end), 1);
        if (unit == "day") return day_range(start);
        if (unit == "week")
            return {day_start(start), day_end(add_days(start, 6)), Granularity::week};
        if (unit == "month")
            return {day_start(start), day_end(add_days(add_months(start, 1), -1)),
                    Granularity::month};
        if (unit == "year")
            return {day_start(start), day_end(add_days(add_months(start, 12), -1)),
                    Granularity::year};
        return fallback_day(ref);
    }
    if (p.rule == "before_anchor" && expr.anchor) {
        std::string unit = fold_case(cap[0]);
        Date end = add_days(date_of(expr.anchor->start), -1);
        if (unit == "day") return day_range(end);
        if (unit == "week")
            return {day_start(add_days(end, -6)), day_end(end), Granularity::week};
        if (unit == "month")
            return {day_start(add_days(add_months(end, -1), 1)), day_end(end),
                    Granularity::month};
        if (unit == "year")
            return {day_start(add_days(add_months(end, -12), 1)), day_end(end),
                    Granularity::year};
        return fallback_day(ref);
    }
    return fallback_day(ref);
}

DatetimeRange TemporalResolver::resolve_or_fallback(const std::string& raw, UtcTime ref,
                                                    std::optional<DatetimeRange> anchor) const {
    if (auto expr = classify(raw, anchor)) return resolve(*expr, ref);
    return fallback_day(ref);
}

}  // namespace chronos
