#include "comove/timeutil.hpp"

#include "comove/errors.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

namespace comove {

// Howard Hinnant's civil-date algorithms (proleptic Gregorian calendar).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

EpochSeconds epoch_from_civil(const CivilDateTime& c, int utc_offset_minutes) {
    const std::int64_t days = days_from_civil(c.year, c.month, c.day);
    const std::int64_t local = days * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
    return local - static_cast<std::int64_t>(utc_offset_minutes) * 60;
}

CivilDateTime civil_from_epoch(EpochSeconds t, int utc_offset_minutes) {
    const std::int64_t local = t + static_cast<std::int64_t>(utc_offset_minutes) * 60;
    std::int64_t days = local / 86400;
    std::int64_t rem = local % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    CivilDateTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

int weekday_from_epoch(EpochSeconds t, int utc_offset_minutes) {
    const std::int64_t local = t + static_cast<std::int64_t>(utc_offset_minutes) * 60;
    std::int64_t days = local / 86400;
    if (local % 86400 < 0) --days;
    // 1970-01-01 was a Thursday (weekday 3 with Monday = 0).
    std::int64_t wd = (days + 3) % 7;
    if (wd < 0) wd += 7;
    return static_cast<int>(wd);
}

namespace {

bool parse_fixed_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char ch = s[i];
        if (ch < '0' || ch > '9') return false;
        value = value * 10 + (ch - '0');
    }
    out = value;
    return true;
}

} // namespace

int parse_utc_offset(const std::string& text) {
    if (text == "Z" || text == "z" || text == "UTC" || text == "utc") return 0;
    if (text.empty() || (text[0] != '+' && text[0] != '-')) {
        throw DataError("invalid UTC offset '" + text + "' (expected Z, UTC, or +HH:MM)");
    }
    const int sign = text[0] == '-' ? -1 : 1;
    int hh = 0;
    int mm = 0;
    if (!parse_fixed_int(text, 1, 2, hh)) {
        throw DataError("invalid UTC offset '" + text + "'");
    }
    std::size_t pos = 3;
    if (pos < text.size() && text[pos] == ':') ++pos;
    if (pos < text.size()) {
        if (!parse_fixed_int(text, pos, 2, mm) || pos + 2 != text.size()) {
            throw DataError("invalid UTC offset '" + text + "'");
        }
    } else if (text.size() != 3) {
        throw DataError("invalid UTC offset '" + text + "'");
    }
    if (hh > 18 || mm > 59) {
        throw DataError("UTC offset '" + text + "' out of range");
    }
    return sign * (hh * 60 + mm);
}

int parse_time_of_day(const std::string& text) {
    int hh = 0;
    int mm = 0;
    if (text.size() != 5 || text[2] != ':' || !parse_fixed_int(text, 0, 2, hh) ||
        !parse_fixed_int(text, 3, 2, mm) || hh > 23 || mm > 59) {
        throw DataError("invalid time of day '" + text + "' (expected HH:MM)");
    }
    return hh * 60 + mm;
}

EpochSeconds parse_iso8601(const std::string& text) {
    CivilDateTime c;
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':' ||
        !parse_fixed_int(text, 0, 4, c.year) || !parse_fixed_int(text, 5, 2, c.month) ||
        !parse_fixed_int(text, 8, 2, c.day) || !parse_fixed_int(text, 11, 2, c.hour) ||
        !parse_fixed_int(text, 14, 2, c.minute) || !parse_fixed_int(text, 17, 2, c.second)) {
        throw DataError("invalid ISO-8601 timestamp '" + text + "'");
    }
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
        c.minute > 59 || c.second > 60) {
        throw DataError("timestamp fields out of range in '" + text + "'");
    }
    const int offset = parse_utc_offset(text.substr(19));
    return epoch_from_civil(c, offset);
}

std::string format_iso8601(EpochSeconds t, int utc_offset_minutes) {
    const CivilDateTime c = civil_from_epoch(t, utc_offset_minutes);
    char buf[40];
    if (utc_offset_minutes == 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month,
                      c.day, c.hour, c.minute, c.second);
    } else {
        const int off = std::abs(utc_offset_minutes);
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", c.year,
                      c.month, c.day, c.hour, c.minute, c.second,
                      utc_offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
    }
    return std::string(buf);
}

} // namespace comove
