#include "comove/ingest.hpp"

#include "comove/errors.hpp"
#include "comove/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace comove;

namespace {

PriceSeries from_csv(const std::string& text, const CsvSchema& schema = {}) {
    std::istringstream in(text);
    return load_price_csv(in, schema, "TEST", "test.csv");
}

// Bars stamped at interval end: open + bar, ..., close.
PriceSeries synthetic_days(const std::string& symbol, int n_days, const Session& session,
                           std::uint64_t seed, const std::vector<int>& skip_bar_of_day = {}) {
    PriceSeries series;
    series.symbol = symbol;
    CounterRng rng(seed);
    double price = 100.0;
    const int bars = session.bars_per_day();
    for (int d = 0; d < n_days; ++d) {
        // Weekdays starting 2008-01-07 (a Monday).
        const std::int64_t day = days_from_civil(2008, 1, 7) + (d / 5) * 7 + (d % 5);
        for (int b = 1; b <= bars; ++b) {
            price *= std::exp(0.001 * rng.next_normal());
            bool skipped = false;
            for (int s : skip_bar_of_day) {
                if (s == b) skipped = true;
            }
            if (skipped) continue;
            const EpochSeconds ts = day * 86400 +
                                    (session.open_minutes * 60 + b * session.bar_seconds) -
                                    session.utc_offset_minutes * 60;
            series.timestamps.push_back(ts);
            series.prices.push_back(price);
        }
    }
    return series;
}

} // namespace

TEST_CASE("load_price_csv parses well-formed rows") {
    const PriceSeries s = from_csv(
        "timestamp,price\n"
        "2008-01-02T09:35:00+01:00,100.5\n"
        "2008-01-02T09:40:00+01:00,101.25\n");
    REQUIRE(s.size() == 2);
    CHECK(s.prices[0] == doctest::Approx(100.5));
    CHECK(s.timestamps[1] - s.timestamps[0] == 300);
}

TEST_CASE("load_price_csv rejects bad input with line numbers") {
    CHECK_THROWS_WITH_AS(from_csv("timestamp,price\n"
                                  "2008-01-02T09:35:00+01:00,-1.0\n"),
                         doctest::Contains("test.csv:2"), DataError);
    CHECK_THROWS_AS(from_csv("timestamp,price\n"
                             "2008-01-02T09:35:00+01:00,abc\n"),
                    DataError);
    CHECK_THROWS_AS(from_csv("timestamp,price\n"
                             "not-a-date,1.0\n"),
                    DataError);
    CHECK_THROWS_AS(from_csv("time,px\n"), DataError); // header mismatch
    CHECK_THROWS_AS(from_csv(""), DataError);
    CHECK_THROWS_AS(from_csv("timestamp,price\n"
                             "2008-01-02T09:35:00+01:00,1.0\n"
                             "2008-01-02T09:35:00+01:00,2.0\n"),
                    DataError); // duplicate timestamp
    CHECK_THROWS_AS(load_price_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("load_price_csv sorts shuffled rows to the same series") {
    const std::string sorted_text =
        "timestamp,price\n"
        "2008-01-02T09:35:00+01:00,100\n"
        "2008-01-02T09:40:00+01:00,101\n"
        "2008-01-02T09:45:00+01:00,102\n";
    const std::string shuffled_text =
        "timestamp,price\n"
        "2008-01-02T09:45:00+01:00,102\n"
        "2008-01-02T09:35:00+01:00,100\n"
        "2008-01-02T09:40:00+01:00,101\n";
    const PriceSeries a = from_csv(sorted_text);
    const PriceSeries b = from_csv(shuffled_text);
    CHECK(a.timestamps == b.timestamps);
    CHECK(a.prices == b.prices);
}

TEST_CASE("schema maps arbitrary column names") {
    CsvSchema schema;
    schema.timestamp_column = "ts";
    schema.price_column = "close";
    const PriceSeries s = from_csv("ts,ignored,close\n"
                                   "2008-01-02T10:00:00Z,x,55.5\n",
                                   schema);
    REQUIRE(s.size() == 1);
    CHECK(s.prices[0] == doctest::Approx(55.5));
}

TEST_CASE("align_sessions keeps identical series unchanged") {
    Session session;
    const PriceSeries a = synthetic_days("A", 3, session, 1);
    const PriceSeries b = synthetic_days("B", 3, session, 2);
    const auto aligned = align_sessions({a, b}, session);
    REQUIRE(aligned.size() == 2);
    CHECK(aligned[0].timestamps == a.timestamps);
    CHECK(aligned[1].timestamps == b.timestamps);
}

TEST_CASE("align_sessions drops a fully missing day from all series") {
    Session session;
    PriceSeries a = synthetic_days("A", 3, session, 3);
    const PriceSeries b = synthetic_days("B", 2, session, 4); // misses day 3
    const auto aligned = align_sessions({a, b}, session);
    const int bars = session.bars_per_day();
    CHECK(aligned[0].size() == static_cast<std::size_t>(2 * bars));
    CHECK(aligned[0].timestamps == aligned[1].timestamps);
}

TEST_CASE("align_sessions intersects missing bars and session windows") {
    Session session; // 09:30-16:00 +01:00
    Session wide = session;
    wide.open_minutes = 9 * 60;
    wide.close_minutes = 17 * 60 + 30;

    // A trades 09:00-17:30, B only 09:30-16:00; B misses one bar mid-day.
    const PriceSeries a = synthetic_days("A", 2, wide, 5);
    const PriceSeries b = synthetic_days("B", 2, session, 6, {10});
    const auto aligned = align_sessions({a, b}, session);

    const int bars = session.bars_per_day();
    CHECK(aligned[0].size() == static_cast<std::size_t>(2 * (bars - 1)));
    CHECK(aligned[0].timestamps == aligned[1].timestamps);
    // Everything left lies inside the session window on the session clock.
    for (EpochSeconds ts : aligned[0].timestamps) {
        const CivilDateTime c = civil_from_epoch(ts, session.utc_offset_minutes);
        const int minutes = c.hour * 60 + c.minute;
        CHECK(minutes >= session.open_minutes);
        CHECK(minutes <= session.close_minutes);
    }

    // Disjoint day ranges have no common timestamps.
    PriceSeries far = synthetic_days("C", 2, session, 7);
    for (auto& ts : far.timestamps) ts += 86400LL * 50;
    CHECK_THROWS_AS(align_sessions({a, far}, session), DataError);
}

TEST_CASE("log_returns avoids overnight gaps and counts 77 per full day") {
    Session session;
    const int bars = session.bars_per_day();
    REQUIRE(bars == 78);

    const PriceSeries prices = synthetic_days("A", 2, session, 8);
    const ReturnSeries returns = log_returns(prices, session);
    CHECK(returns.size() == static_cast<std::size_t>(2 * 77));
    CHECK(returns.day_index.front() == 0);
    CHECK(returns.day_index.back() == 1);

    // Two days x two prices each: exactly two returns, none across days.
    PriceSeries two;
    two.symbol = "T";
    const std::int64_t day0 = days_from_civil(2008, 1, 7) * 86400;
    two.timestamps = {day0 + 9 * 3600, day0 + 9 * 3600 + 300, day0 + 86400 + 9 * 3600,
                      day0 + 86400 + 9 * 3600 + 300};
    two.prices = {100.0, 100.0 * std::exp(0.01), 200.0, 100.0};
    const ReturnSeries r2 = log_returns(two, session);
    REQUIRE(r2.size() == 2);
    CHECK(r2.returns[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r2.returns[1] == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(r2.day_index[0] == 0);
    CHECK(r2.day_index[1] == 1);

    // Identical prices give a zero return.
    PriceSeries flat;
    flat.symbol = "F";
    flat.timestamps = {day0 + 9 * 3600, day0 + 9 * 3600 + 300};
    flat.prices = {100.0, 100.0};
    CHECK(log_returns(flat, session).returns[0] == 0.0);

    // A single-price day is skipped with a warning.
    PriceSeries lonely = flat;
    lonely.timestamps.push_back(day0 + 86400 + 9 * 3600);
    lonely.prices.push_back(50.0);
    std::vector<std::string> warnings;
    const ReturnSeries rl = log_returns(lonely, session, &warnings);
    CHECK(rl.size() == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("aligned series produce identical return timestamps") {
    Session session;
    const PriceSeries a = synthetic_days("A", 3, session, 9, {5});
    const PriceSeries b = synthetic_days("B", 3, session, 10, {40});
    const auto aligned = align_sessions({a, b}, session);
    const ReturnSeries ra = log_returns(aligned[0], session);
    const ReturnSeries rb = log_returns(aligned[1], session);
    CHECK(ra.timestamps == rb.timestamps);
    CHECK(ra.day_index == rb.day_index);
}

TEST_CASE("descriptive stats on simple patterns") {
    const DescriptiveStats sym = descriptive_stats({1.0, -1.0, 1.0, -1.0});
    CHECK(sym.mean == doctest::Approx(0.0));
    REQUIRE(sym.skewness.has_value());
    CHECK(*sym.skewness == doctest::Approx(0.0));
    CHECK(sym.min == -1.0);
    CHECK(sym.max == 1.0);

    const DescriptiveStats flat = descriptive_stats({0.0, 0.0, 0.0});
    CHECK(flat.st_dev == 0.0);
    CHECK(!flat.skewness.has_value());
    CHECK(!flat.kurtosis.has_value());

    CHECK_THROWS_AS(descriptive_stats(std::vector<double>{1.0}), UsageError);
}

TEST_CASE("kurtosis of a large normal sample is close to 3") {
    CounterRng rng(314159);
    std::vector<double> draws(1000000);
    for (auto& v : draws) v = rng.next_normal();
    const DescriptiveStats stats = descriptive_stats(draws);
    REQUIRE(stats.kurtosis.has_value());
    CHECK(*stats.kurtosis == doctest::Approx(3.0).epsilon(0.05 / 3.0));
    CHECK(std::abs(stats.mean) < 0.005);
    CHECK(stats.st_dev == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("descriptive stats transform predictably under affine maps") {
    CounterRng rng(271828);
    std::vector<double> x(5000);
    for (auto& v : x) v = std::exp(rng.next_normal()); // skewed sample
    const double a = -2.5;
    const double b = 0.75;
    std::vector<double> mapped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mapped[i] = a * x[i] + b;

    const DescriptiveStats sx = descriptive_stats(x);
    const DescriptiveStats sm = descriptive_stats(mapped);
    CHECK(sm.mean == doctest::Approx(a * sx.mean + b).epsilon(1e-10));
    CHECK(sm.st_dev == doctest::Approx(std::abs(a) * sx.st_dev).epsilon(1e-10));
    CHECK(*sm.skewness == doctest::Approx(-*sx.skewness).epsilon(1e-8));
    CHECK(*sm.kurtosis == doctest::Approx(*sx.kurtosis).epsilon(1e-8));
    CHECK(sm.min == doctest::Approx(a * sx.max + b));
    CHECK(sm.max == doctest::Approx(a * sx.min + b));
}

TEST_CASE("session validation") {
    Session bad;
    bad.open_minutes = 16 * 60;
    bad.close_minutes = 9 * 60;
    CHECK_THROWS_AS(validate_session(bad), UsageError);

    Session ragged;
    ragged.close_minutes = ragged.open_minutes + 7; // not a bar multiple
    CHECK_THROWS_AS(validate_session(ragged), UsageError);

    CHECK_THROWS_AS(align_sessions({}, Session{}), UsageError);
}
