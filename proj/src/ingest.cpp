#include "comove/ingest.hpp"

#include "comove/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace comove {

void validate_session(const Session& session) {
    if (session.open_minutes >= session.close_minutes) {
        throw UsageError("session open must precede close");
    }
    if (session.bar_seconds <= 0) {
        throw UsageError("bar interval must be positive");
    }
    const int span_seconds = (session.close_minutes - session.open_minutes) * 60;
    if (span_seconds % session.bar_seconds != 0) {
        throw UsageError("session length must be an integer multiple of the bar interval");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string token;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(token);
            token.clear();
        } else if (ch != '\r') {
            token.push_back(ch);
        }
    }
    fields.push_back(token);
    return fields;
}

std::string trim(const std::string& value) {
    const auto first = value.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = value.find_last_not_of(" \t");
    return value.substr(first, last - first + 1);
}

double parse_price(const std::string& text, const std::string& name, std::size_t line_no) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end || t.empty()) {
        throw DataError(name + ":" + std::to_string(line_no) + ": malformed price '" + text + "'");
    }
    return value;
}

/// Minutes past local midnight, or -1 when the stamp is not on the bar grid.
int session_grid_minute(EpochSeconds t, const Session& session) {
    const std::int64_t local = t + static_cast<std::int64_t>(session.utc_offset_minutes) * 60;
    std::int64_t sec = local % 86400;
    if (sec < 0) sec += 86400;
    const std::int64_t open_sec = static_cast<std::int64_t>(session.open_minutes) * 60;
    const std::int64_t close_sec = static_cast<std::int64_t>(session.close_minutes) * 60;
    if (sec < open_sec || sec > close_sec) return -1;
    if ((sec - open_sec) % session.bar_seconds != 0) return -1;
    return static_cast<int>(sec / 60);
}

std::int64_t local_day(EpochSeconds t, const Session& session) {
    const std::int64_t local = t + static_cast<std::int64_t>(session.utc_offset_minutes) * 60;
    std::int64_t days = local / 86400;
    if (local % 86400 < 0) --days;
    return days;
}

} // namespace

PriceSeries load_price_csv(std::istream& in, const CsvSchema& schema, const std::string& symbol,
                           const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(name + ": empty file (header row required)");
    }
    const auto header = split_csv_line(line);
    std::ptrdiff_t ts_col = -1;
    std::ptrdiff_t px_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string h = trim(header[i]);
        if (h == schema.timestamp_column) ts_col = static_cast<std::ptrdiff_t>(i);
        if (h == schema.price_column) px_col = static_cast<std::ptrdiff_t>(i);
    }
    if (ts_col < 0 || px_col < 0) {
        throw DataError(name + ": header must name columns '" + schema.timestamp_column +
                        "' and '" + schema.price_column + "'");
    }

    PriceSeries series;
    series.symbol = symbol;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const auto need = static_cast<std::size_t>(std::max(ts_col, px_col)) + 1;
        if (fields.size() < need) {
            throw DataError(name + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(need) + " columns, got " +
                            std::to_string(fields.size()));
        }
        EpochSeconds ts;
        try {
            ts = parse_iso8601(trim(fields[static_cast<std::size_t>(ts_col)]));
        } catch (const DataError& e) {
            throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const double price = parse_price(fields[static_cast<std::size_t>(px_col)], name, line_no);
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw DataError(name + ":" + std::to_string(line_no) + ": non-positive price " +
                            std::to_string(price));
        }
        series.timestamps.push_back(ts);
        series.prices.push_back(price);
    }

    std::vector<std::size_t> order(series.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return series.timestamps[a] < series.timestamps[b];
    });
    PriceSeries sorted;
    sorted.symbol = series.symbol;
    sorted.timestamps.reserve(series.size());
    sorted.prices.reserve(series.size());
    for (std::size_t idx : order) {
        if (!sorted.timestamps.empty() && sorted.timestamps.back() == series.timestamps[idx]) {
            throw DataError(name + ": duplicate timestamp " +
                            format_iso8601(series.timestamps[idx], 0));
        }
        sorted.timestamps.push_back(series.timestamps[idx]);
        sorted.prices.push_back(series.prices[idx]);
    }
    return sorted;
}

PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema,
                           const std::string& symbol) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::string sym = symbol;
    if (sym.empty()) {
        // Derive from the file name, e.g. data/DAX.csv -> DAX.
        auto slash = path.find_last_of("/\\");
        std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = base.find_last_of('.');
        sym = dot == std::string::npos ? base : base.substr(0, dot);
    }
    return load_price_csv(in, schema, sym, path);
}

std::vector<PriceSeries> align_sessions(const std::vector<PriceSeries>& series,
                                        const Session& session) {
    validate_session(session);
    if (series.empty()) {
        throw UsageError("align_sessions requires at least one series");
    }

    // Per series: day -> set of grid timestamps inside [open, close].
    std::vector<std::map<std::int64_t, std::set<EpochSeconds>>> per_day(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t k = 0; k < series[i].size(); ++k) {
            const EpochSeconds t = series[i].timestamps[k];
            if (session_grid_minute(t, session) < 0) continue;
            per_day[i][local_day(t, session)].insert(t);
        }
    }

    // Days present in every series.
    std::vector<std::int64_t> common_days;
    for (const auto& [day, stamps] : per_day[0]) {
        (void)stamps;
        bool everywhere = true;
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (per_day[i].find(day) == per_day[i].end()) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) common_days.push_back(day);
    }

    std::vector<EpochSeconds> keep;
    for (std::int64_t day : common_days) {
        std::vector<EpochSeconds> stamps(per_day[0][day].begin(), per_day[0][day].end());
        for (std::size_t i = 1; i < series.size() && !stamps.empty(); ++i) {
            const auto& other = per_day[i][day];
            std::vector<EpochSeconds> merged;
            std::set_intersection(stamps.begin(), stamps.end(), other.begin(), other.end(),
                                  std::back_inserter(merged));
            stamps.swap(merged);
        }
        keep.insert(keep.end(), stamps.begin(), stamps.end());
    }
    if (keep.empty()) {
        throw DataError("aligned sessions are empty: no common timestamps across inputs");
    }

    std::vector<PriceSeries> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i].symbol = series[i].symbol;
        out[i].timestamps.reserve(keep.size());
        out[i].prices.reserve(keep.size());
        std::size_t pos = 0;
        for (EpochSeconds t : keep) {
            while (pos < series[i].size() && series[i].timestamps[pos] < t) ++pos;
            // Present by construction of the intersection.
            out[i].timestamps.push_back(t);
            out[i].prices.push_back(series[i].prices[pos]);
        }
    }
    return out;
}

ReturnSeries log_returns(const PriceSeries& prices, const Session& session,
                         std::vector<std::string>* warnings) {
    validate_session(session);
    ReturnSeries out;
    out.symbol = prices.symbol;
    out.utc_offset_minutes = session.utc_offset_minutes;

    std::size_t i = 0;
    int day_ordinal = -1;
    bool any_day_with_pair = false;
    while (i < prices.size()) {
        const std::int64_t day = local_day(prices.timestamps[i], session);
        std::size_t j = i;
        while (j < prices.size() && local_day(prices.timestamps[j], session) == day) ++j;
        if (j - i < 2) {
            if (warnings != nullptr) {
                warnings->push_back("day " + format_iso8601(prices.timestamps[i],
                                                            session.utc_offset_minutes)
                                            .substr(0, 10) +
                                    " skipped: fewer than two prices");
            }
            i = j;
            continue;
        }
        ++day_ordinal;
        for (std::size_t k = i + 1; k < j; ++k) {
            if (prices.timestamps[k] - prices.timestamps[k - 1] != session.bar_seconds) {
                continue; // gap inside the day; no return across it
            }
            out.timestamps.push_back(prices.timestamps[k]);
            out.returns.push_back(std::log(prices.prices[k]) - std::log(prices.prices[k - 1]));
            out.day_index.push_back(day_ordinal);
        }
        any_day_with_pair = true;
        i = j;
    }
    if (!any_day_with_pair) {
        throw DataError("log_returns: no day contains two or more prices");
    }
    return out;
}

DescriptiveStats descriptive_stats(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw UsageError("descriptive_stats requires at least two observations");
    }
    DescriptiveStats s;
    s.n = values.size();
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.st_dev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

} // namespace comove
