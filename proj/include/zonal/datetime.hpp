// Civil date-time helpers for hourly weather series and solar geometry.
#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace zonal {

// Wall-clock civil time, no timezone attached. The site's UTC offset is
// carried separately (Site::utc_offset_hours) and only matters for solar
// geometry.
struct DateTime {
    int year = 2001;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;   // 0..23
    int minute = 0;
    int second = 0;

    friend bool operator==(const DateTime&, const DateTime&) = default;
};

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int year, int month) {
    static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
    if (month == 2 && is_leap_year(year)) return 29;
    return d[month - 1];
}

inline int day_of_year(const DateTime& t) {
    int doy = t.day;
    for (int m = 1; m < t.month; ++m) doy += days_in_month(t.year, m);
    return doy;
}

// Days since civil epoch 1970-01-01 (proleptic Gregorian).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline std::int64_t to_unix_seconds(const DateTime& t) {
    return days_from_civil(t.year, t.month, t.day) * 86400 + t.hour * 3600 +
           t.minute * 60 + t.second;
}

inline DateTime from_unix_seconds(std::int64_t s) {
    std::int64_t z = s / 86400;
    std::int64_t rem = s - z * 86400;
    if (rem < 0) {
        rem += 86400;
        z -= 1;
    }
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    DateTime t;
    t.year = static_cast<int>(y + (m <= 2));
    t.month = static_cast<int>(m);
    t.day = static_cast<int>(d);
    t.hour = static_cast<int>(rem / 3600);
    t.minute = static_cast<int>((rem % 3600) / 60);
    t.second = static_cast<int>(rem % 60);
    return t;
}

inline DateTime add_seconds(const DateTime& t, std::int64_t s) {
    return from_unix_seconds(to_unix_seconds(t) + s);
}

// Decimal civil hour of day, e.g. 13.5 for 13:30.
inline double hour_of_day(const DateTime& t) {
    return t.hour + t.minute / 60.0 + t.second / 3600.0;
}

// Accepts "YYYY-MM-DD HH:MM[:SS]" or ISO-8601 "YYYY-MM-DDTHH:MM[:SS]".
inline DateTime parse_datetime(const std::string& text) {
    DateTime t;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &t.year, &t.month, &t.day,
                        &sep, &t.hour, &t.minute, &t.second);
    if (n == 3) {
        t.hour = t.minute = t.second = 0;
    } else if (n < 6 || (sep != 'T' && sep != ' ')) {
        throw std::invalid_argument("unparseable timestamp: '" + text + "'");
    }
    if (n == 6) t.second = 0;
    if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > days_in_month(t.year, t.month) ||
        t.hour < 0 || t.hour > 23 || t.minute < 0 || t.minute > 59 || t.second < 0 ||
        t.second > 60) {
        throw std::invalid_argument("timestamp field out of range: '" + text + "'");
    }
    return t;
}

inline std::string format_datetime(const DateTime& t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", t.year, t.month,
                  t.day, t.hour, t.minute, t.second);
    return buf;
}

}  // namespace zonal
