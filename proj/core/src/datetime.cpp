#include "chronos/datetime.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace chronos {

namespace {

using std::chrono::day;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::month;
using std::chrono::seconds;
using std::chrono::sys_days;
using std::chrono::year;

bool read_uint(std::string_view s, size_t& pos, size_t digits, int& out) {
    if (pos + digits > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < digits; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += digits;
    out = v;
    return true;
}

bool read_char(std::string_view s, size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

// YYYY-MM-DD or YYYY/MM/DD starting at pos
bool read_ymd(std::string_view s, size_t& pos, Date& out) {
    size_t p = pos;
    int y, m, d;
    if (!read_uint(s, p, 4, y)) return false;
    char sep = p < s.size() ? s[p] : '\0';
    if (sep != '-' && sep != '/') return false;
    ++p;
    if (!read_uint(s, p, 2, m)) return false;
    if (!read_char(s, p, sep)) return false;
    if (!read_uint(s, p, 2, d)) return false;
    Date ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    pos = p;
    out = ymd;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<UtcTime> parse_datetime(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) return std::nullopt;

    size_t pos = 0;
    Date d{};
    if (!read_ymd(s, pos, d)) return std::nullopt;

    // Optional " (Day)" weekday annotation used by benchmark timestamps.
    if (pos + 1 < s.size() && s[pos] == ' ' && s[pos + 1] == '(') {
        size_t close = s.find(')', pos);
        if (close == std::string_view::npos) return std::nullopt;
        pos = close + 1;
    }

    seconds tod{0};
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
        ++pos;
        while (pos < s.size() && s[pos] == ' ') ++pos;
        int hh, mm, ss = 0;
        if (!read_uint(s, pos, 2, hh)) return std::nullopt;
        if (!read_char(s, pos, ':')) return std::nullopt;
        if (!read_uint(s, pos, 2, mm)) return std::nullopt;
        if (read_char(s, pos, ':')) {
            if (!read_uint(s, pos, 2, ss)) return std::nullopt;
            if (read_char(s, pos, '.')) {  // truncate fractional seconds
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
        if (ss == 60) ss = 59;  // leap seconds clamp
        tod = hours{hh} + minutes{mm} + seconds{ss};

        // Zone designator: Z, +HH:MM, -HH:MM, +HHMM
        seconds offset{0};
        if (pos < s.size()) {
            char c = s[pos];
            if (c == 'Z' || c == 'z') {
                ++pos;
            } else if (c == '+' || c == '-') {
                int sign = c == '+' ? 1 : -1;
                ++pos;
                int oh, om = 0;
                if (!read_uint(s, pos, 2, oh)) return std::nullopt;
                read_char(s, pos, ':');
                if (pos < s.size()) {
                    if (!read_uint(s, pos, 2, om)) return std::nullopt;
                }
                offset = seconds{sign * (oh * 3600 + om * 60)};
            }
        }
        if (pos != s.size()) return std::nullopt;
        return UtcTime{sys_days{d} + tod - offset};
    }
    return UtcTime{sys_days{d}};
}

std::optional<Date> parse_date(std::string_view text) {
    std::string_view s = trim(text);
    size_t pos = 0;
    Date d{};
    if (!read_ymd(s, pos, d)) return std::nullopt;
    if (pos != s.size()) {
        // allow a trailing time component or weekday annotation
        if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    }
    return d;
}

std::string format_datetime(UtcTime t) {
    sys_days sd = std::chrono::floor<std::chrono::days>(t);
    Date ymd{sd};
    seconds rem = t - sd;
    int h = static_cast<int>(rem.count() / 3600);
    int m = static_cast<int>((rem.count() % 3600) / 60);
    int s = static_cast<int>(rem.count() % 60);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, s);
    return buf;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

UtcTime day_start(Date d) { return UtcTime{sys_days{d}}; }

UtcTime day_end(Date d) { return UtcTime{sys_days{d} + hours{23} + minutes{59} + seconds{59}}; }

Date date_of(UtcTime t) { return Date{std::chrono::floor<std::chrono::days>(t)}; }

Date add_days(Date d, int n) { return Date{sys_days{d} + std::chrono::days{n}}; }

Date add_months(Date d, int n) {
    std::chrono::year_month ym{d.year(), d.month()};
    ym += std::chrono::months{n};
    Date candidate{ym.year(), ym.month(), d.day()};
    if (!candidate.ok()) {
        candidate = Date{ym.year() / ym.month() / std::chrono::last};
    }
    return candidate;
}

Date month_first(Date d) { return Date{d.year(), d.month(), day{1}}; }

Date month_last(Date d) { return Date{d.year() / d.month() / std::chrono::last}; }

Date year_first(Date d) { return Date{d.year(), month{1}, day{1}}; }

Date year_last(Date d) { return Date{d.year(), month{12}, day{31}}; }

Date week_monday(Date d) {
    std::chrono::weekday wd{sys_days{d}};
    unsigned iso = wd.iso_encoding();  // 1=Mon..7=Sun
    return add_days(d, -static_cast<int>(iso - 1));
}

unsigned iso_weekday(Date d) { return std::chrono::weekday{sys_days{d}}.iso_encoding(); }

}  // namespace chronos
