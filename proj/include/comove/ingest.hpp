#pragma once

#include "comove/series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace comove {

/// Column mapping for price CSV input. The file must be UTF-8 with a header
/// row naming both columns; timestamps are ISO-8601 with explicit offset.
struct CsvSchema {
    std::string timestamp_column = "timestamp";
    std::string price_column = "price";
};

/// Loads a (timestamp, price) CSV into a PriceSeries sorted by timestamp.
/// Rejects non-positive prices, malformed rows (reported with their line
/// number) and duplicate timestamps.
PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema = {},
                           const std::string& symbol = "");

PriceSeries load_price_csv(std::istream& in, const CsvSchema& schema = {},
                           const std::string& symbol = "", const std::string& name = "<stream>");

/// Restricts every series to the session bar grid and keeps, per trading
/// day, only timestamps present in all inputs. Days entirely missing from
/// any series are dropped for all. Throws DataError when nothing remains.
std::vector<PriceSeries> align_sessions(const std::vector<PriceSeries>& series,
                                        const Session& session);

/// Computes log returns between bar-interval-adjacent prices within each
/// trading day; no return spans a day boundary. Days with fewer than two
/// prices are skipped with a warning record.
ReturnSeries log_returns(const PriceSeries& prices, const Session& session,
                         std::vector<std::string>* warnings = nullptr);

/// Sample descriptive statistics; requires n >= 2.
DescriptiveStats descriptive_stats(const std::vector<double>& values);

inline DescriptiveStats descriptive_stats(const ReturnSeries& series) {
    return descriptive_stats(series.returns);
}

} // namespace comove
