#include "comove/synth.hpp"

#include "comove/errors.hpp"
#include "comove/wcorr.hpp"

#include <doctest.h>

#include <cmath>

using namespace comove;

TEST_CASE("counter rng is a pure function of its seed spec") {
    CounterRng a(SeedSpec{123, 5});
    CounterRng b(SeedSpec{123, 5});
    CounterRng c(SeedSpec{123, 6});
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(any_diff);
}

TEST_CASE("uniform draws stay strictly inside (0, 1)") {
    CounterRng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal quantile matches tabulated values") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), NumericError);
}

TEST_CASE("gen_ar1 is deterministic and hits the stationary variance") {
    const std::vector<double> a = gen_ar1(1000, 0.5, 2.0, {99, 3});
    const std::vector<double> b = gen_ar1(1000, 0.5, 2.0, {99, 3});
    CHECK(a == b);

    const std::size_t n = 100000;
    const std::vector<double> white = gen_ar1(n, 0.0, 1.5, {17, 0});
    double var = 0.0;
    double mean = 0.0;
    for (double v : white) mean += v;
    mean /= static_cast<double>(n);
    for (double v : white) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    CHECK(var == doctest::Approx(1.5 * 1.5).epsilon(0.03));

    const std::vector<double> persistent = gen_ar1(n, 0.9, 1.0, {18, 0});
    double var9 = 0.0;
    mean = 0.0;
    for (double v : persistent) mean += v;
    mean /= static_cast<double>(n);
    for (double v : persistent) var9 += (v - mean) * (v - mean);
    var9 /= static_cast<double>(n - 1);
    CHECK(var9 == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(0.05));

    CHECK_THROWS_AS(gen_ar1(10, 1.0, 1.0, {1, 0}), UsageError);
    CHECK_THROWS_AS(gen_ar1(10, 0.5, 0.0, {1, 0}), UsageError);
    CHECK_THROWS_AS(gen_ar1(0, 0.5, 1.0, {1, 0}), UsageError);
}

TEST_CASE("gen_correlated_pair with all rho = 1 returns a duplicated series") {
    const WaveletFilter la8 = wavelet_filter("la8");
    const auto [x, y] = gen_correlated_pair(512, {1.0, 1.0, 1.0, 1.0}, la8, {55, 0});
    for (std::size_t t = 0; t < x.size(); ++t) {
        CHECK(std::abs(x[t] - y[t]) <= 1e-8);
    }
}

TEST_CASE("gen_correlated_pair with zero targets produces uncorrelated bands") {
    const WaveletFilter la8 = wavelet_filter("la8");
    const auto [x, y] =
        gen_correlated_pair(20000, {0.0, 0.0, 0.0, 0.0}, la8, {56, 0});
    const WaveletCorrelation wc = wavelet_correlation(x, y, la8, 4, 0.05);
    REQUIRE(wc.scales.size() == 4);
    for (const auto& sc : wc.scales) {
        CHECK(std::abs(sc.rho) <= 0.05);
    }
}

TEST_CASE("gen_correlated_pair recovers a scale-1 target") {
    const WaveletFilter la8 = wavelet_filter("la8");
    const auto [x, y] =
        gen_correlated_pair(20000, {0.8, 0.0, 0.0, 0.0}, la8, {57, 0});
    const WaveletCorrelation wc = wavelet_correlation(x, y, la8, 4, 0.05);
    REQUIRE(wc.scales.size() == 4);
    CHECK(wc.scales[0].rho >= 0.75);
    CHECK(wc.scales[0].rho <= 0.85);
    CHECK(std::abs(wc.scales[2].rho) <= 0.05);

    CHECK_THROWS_AS(gen_correlated_pair(100, {1.5}, la8, {1, 0}), UsageError);
}

TEST_CASE("direct transform guards its quadratic cost") {
    CHECK_THROWS_AS(
        morlet_cwt_direct(std::vector<double>(4096, 0.0), default_scale_grid(4096)),
        UsageError);
}
