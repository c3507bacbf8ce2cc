#pragma once

#include "comove/timeutil.hpp"

#include <optional>
#include <string>
#include <vector>

namespace comove {

/// Raw intraday price bars for one symbol, strictly increasing timestamps,
/// all prices positive.
struct PriceSeries {
    std::string symbol;
    std::vector<EpochSeconds> timestamps;
    std::vector<double> prices;

    std::size_t size() const { return timestamps.size(); }
};

/// Trading session on a fixed-offset clock. Bars are stamped at interval
/// end, so a 09:30-16:00 session with 5-minute bars carries 78 bar stamps
/// (09:35 .. 16:00) and yields 77 intraday returns.
struct Session {
    int open_minutes = 9 * 60 + 30;
    int close_minutes = 16 * 60;
    int utc_offset_minutes = 60;
    int bar_seconds = 300;

    int bars_per_day() const {
        return (close_minutes - open_minutes) * 60 / bar_seconds;
    }
};

/// Validates session invariants: open < close, interval divides the session.
void validate_session(const Session& session);

/// Intraday log returns with the overnight gap removed. day_index is the
/// trading-day ordinal of each observation (0-based, shared across aligned
/// series).
struct ReturnSeries {
    std::string symbol;
    std::vector<EpochSeconds> timestamps;
    std::vector<double> returns;
    std::vector<int> day_index;
    int utc_offset_minutes = 0;

    std::size_t size() const { return returns.size(); }
};

/// Sample moments: n-1 standard deviation, moment-ratio skewness, raw
/// kurtosis (normal = 3). Skewness/kurtosis are absent for constant input.
struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double st_dev = 0.0;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
    double min = 0.0;
    double max = 0.0;
};

} // namespace comove
