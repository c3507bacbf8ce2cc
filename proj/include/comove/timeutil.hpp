#pragma once

#include <cstdint>
#include <string>

namespace comove {

/// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

struct CivilDateTime {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

EpochSeconds epoch_from_civil(const CivilDateTime& c, int utc_offset_minutes);
CivilDateTime civil_from_epoch(EpochSeconds t, int utc_offset_minutes);

/// Day of week, 0 = Monday .. 6 = Sunday.
int weekday_from_epoch(EpochSeconds t, int utc_offset_minutes);

/// Parses "YYYY-MM-DDTHH:MM:SS" followed by an explicit offset
/// ("Z", "+HH:MM", "-HHMM", "+HH"). A space may replace the 'T'.
EpochSeconds parse_iso8601(const std::string& text);

/// Parses a bare offset designator ("Z", "UTC", "+01:00", "-0530") to minutes.
int parse_utc_offset(const std::string& text);

/// Parses "HH:MM" to minutes past midnight.
int parse_time_of_day(const std::string& text);

/// Formats with the given fixed offset, e.g. "2008-01-02T09:35:00+01:00".
std::string format_iso8601(EpochSeconds t, int utc_offset_minutes);

} // namespace comove
