#include "comove/coherence.hpp"

#include "comove/errors.hpp"
#include "comove/rng.hpp"
#include "comove/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace comove;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_normal();
    return x;
}

CwtField field_from_matrix(ComplexMatrix m, const ScaleGrid& grid) {
    CwtField f;
    f.grid = grid;
    f.n_original = m.cols();
    f.coi = cone_of_influence(m.cols(), grid.dt, grid);
    f.coefficients = std::move(m);
    return f;
}

} // namespace

TEST_CASE("cross wavelet is the conjugate product") {
    const ScaleGrid grid = make_scale_grid(1.0, 2.0, 0.5, 2);

    ComplexMatrix a(2, 4);
    ComplexMatrix b(2, 4);
    a(0, 0) = {1.0, 1.0};
    b(0, 0) = {1.0, -1.0};
    const CrossField cross =
        cross_wavelet(field_from_matrix(a, grid), field_from_matrix(b, grid));
    CHECK(cross.values(0, 0).real() == doctest::Approx(0.0));
    CHECK(cross.values(0, 0).imag() == doctest::Approx(2.0));

    // Self product is |W|^2: real and non-negative.
    const std::vector<double> x = random_series(64, 5);
    const CwtField wx = morlet_cwt(x, default_scale_grid(64));
    const CrossField self = cross_wavelet(wx, wx);
    for (const auto& v : self.values.data()) {
        CHECK(v.imag() == 0.0);
        CHECK(v.real() >= 0.0);
    }

    // Zero field annihilates.
    ComplexMatrix za(2, 4);
    ComplexMatrix zb(2, 4);
    zb(1, 1) = {3.0, 4.0};
    const CrossField zero =
        cross_wavelet(field_from_matrix(za, grid), field_from_matrix(zb, grid));
    for (const auto& v : zero.values.data()) CHECK(std::abs(v) == 0.0);

    const ScaleGrid other = make_scale_grid(1.0, 2.0, 0.5, 3);
    ComplexMatrix c(3, 4);
    CHECK_THROWS_AS(cross_wavelet(field_from_matrix(a, grid), field_from_matrix(c, other)),
                    UsageError);
}

TEST_CASE("smoothing preserves constants and total mass") {
    const ScaleGrid grid = make_scale_grid(1.0, 2.0, 0.25, 12);

    RealMatrix constant(12, 40, 2.5);
    const RealMatrix sc = smooth(constant, grid);
    for (double v : sc.data()) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

    // An interior impulse spreads with its total mass preserved: every
    // column reached by row 3's Gaussian (radius 14) has its own kernel
    // fully inside the 80 columns, and the 3-row boxcar span stays inside
    // the 12 rows, so no renormalization is triggered anywhere it lands.
    RealMatrix impulse(12, 80, 0.0);
    impulse(3, 40) = 1.0;
    const RealMatrix si = smooth(impulse, grid);
    const RealMatrix oracle = testing::smooth_brute(impulse, grid);
    double mass = 0.0;
    for (std::size_t i = 0; i < si.data().size(); ++i) {
        CHECK(std::abs(si.data()[i] - oracle.data()[i]) <= 1e-12);
        mass += si.data()[i];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("smoothing equals the brute-force double-loop oracle") {
    const ScaleGrid grid = make_scale_grid(1.0, 2.0, 1.0 / 12.0, 16);
    CounterRng rng(99);

    RealMatrix real_field(16, 64);
    for (auto& v : real_field.data()) v = rng.next_normal();
    const RealMatrix smoothed = smooth(real_field, grid);
    const RealMatrix expected = testing::smooth_brute(real_field, grid);
    for (std::size_t i = 0; i < smoothed.data().size(); ++i) {
        CHECK(std::abs(smoothed.data()[i] - expected.data()[i]) <= 1e-12);
    }

    ComplexMatrix complex_field(16, 64);
    for (auto& v : complex_field.data()) v = {rng.next_normal(), rng.next_normal()};
    const ComplexMatrix smoothed_c = smooth(complex_field, grid);
    const ComplexMatrix expected_c = testing::smooth_brute(complex_field, grid);
    for (std::size_t i = 0; i < smoothed_c.data().size(); ++i) {
        CHECK(std::abs(smoothed_c.data()[i] - expected_c.data()[i]) <= 1e-12);
    }
}

TEST_CASE("self coherence is one with zero phase") {
    const std::size_t n = 256;
    const std::vector<double> x = random_series(n, 61);
    const ScaleGrid grid = default_scale_grid(n);
    const CoherenceField field = wavelet_coherence(x, x, grid);
    for (std::size_t k = 0; k < field.r2.rows(); ++k) {
        for (std::size_t u = 0; u < field.r2.cols(); ++u) {
            CHECK(std::abs(field.r2(k, u) - 1.0) <= 1e-10);
            CHECK(std::abs(field.phase(k, u)) <= 1e-10);
        }
    }
}

TEST_CASE("anti-phase pair has unit coherence and phase pi") {
    const std::size_t n = 256;
    const std::vector<double> x = random_series(n, 62);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -x[i];
    const CoherenceField field = wavelet_coherence(x, y, default_scale_grid(n));
    for (std::size_t k = 0; k < field.r2.rows(); k += 5) {
        for (std::size_t u = 0; u < field.r2.cols(); u += 13) {
            CHECK(std::abs(field.r2(k, u) - 1.0) <= 1e-10);
            CHECK(std::abs(std::abs(field.phase(k, u)) - M_PI) <= 1e-10);
        }
    }
}

TEST_CASE("coherence is invariant under positive rescaling") {
    const std::size_t n = 200;
    const std::vector<double> x = random_series(n, 63);
    const std::vector<double> y = random_series(n, 64);
    std::vector<double> x_scaled(n);
    for (std::size_t i = 0; i < n; ++i) x_scaled[i] = 37.5 * x[i];

    const ScaleGrid grid = default_scale_grid(n);
    const CoherenceField a = wavelet_coherence(x, y, grid);
    const CoherenceField b = wavelet_coherence(x_scaled, y, grid);
    for (std::size_t i = 0; i < a.r2.data().size(); ++i) {
        CHECK(std::abs(a.r2.data()[i] - b.r2.data()[i]) <= 1e-10);
    }
}

TEST_CASE("swapping inputs negates the phase and keeps r2") {
    const std::size_t n = 200;
    const std::vector<double> x = random_series(n, 65);
    const std::vector<double> y = random_series(n, 66);
    const ScaleGrid grid = default_scale_grid(n);
    const CoherenceField xy = wavelet_coherence(x, y, grid);
    const CoherenceField yx = wavelet_coherence(y, x, grid);
    for (std::size_t i = 0; i < xy.r2.data().size(); ++i) {
        CHECK(std::abs(xy.r2.data()[i] - yx.r2.data()[i]) <= 1e-10);
        // Angles negate modulo 2*pi; compare on the circle.
        const double sum = xy.phase.data()[i] + yx.phase.data()[i];
        const double wrapped = std::remainder(sum, 2.0 * M_PI);
        CHECK(std::abs(wrapped) <= 1e-9);
    }
}

TEST_CASE("r2 stays in [0, 1] for independent inputs") {
    const std::size_t n = 300;
    const CoherenceField field =
        wavelet_coherence(random_series(n, 67), random_series(n, 68), default_scale_grid(n));
    double mean = 0.0;
    for (double v : field.r2.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        mean += v;
    }
    mean /= static_cast<double>(field.r2.data().size());
    CHECK(mean < 0.9); // independent noise should not look coherent
}

TEST_CASE("wavelet_coherence input validation") {
    const ScaleGrid grid = default_scale_grid(64);
    CHECK_THROWS_AS(wavelet_coherence(random_series(64, 1), random_series(65, 2), grid),
                    UsageError);
    CHECK_THROWS_AS(
        wavelet_coherence(std::vector<double>(64, 1.0), random_series(64, 2), grid),
        NumericError);
}

TEST_CASE("phase arrows follow the four conventions") {
    CHECK(phase_to_arrow(0.0) == ArrowClass::right);
    CHECK(phase_to_arrow(M_PI) == ArrowClass::left);
    CHECK(phase_to_arrow(-M_PI / 2.0) == ArrowClass::down);
    CHECK(phase_to_arrow(M_PI / 2.0) == ArrowClass::up);
    CHECK(phase_to_arrow(M_PI / 4.0) == ArrowClass::up_right);
    CHECK(phase_to_arrow(-3.0 * M_PI / 4.0) == ArrowClass::down_left);
    CHECK(phase_to_arrow(0.99 * M_PI) == ArrowClass::left);
    CHECK(phase_to_arrow(-0.99 * M_PI) == ArrowClass::left);
    CHECK(std::string(arrow_name(ArrowClass::down_right)) == "down_right");
}

TEST_CASE("ar1 fit recovers simulated coefficients") {
    const std::size_t n = 100000;
    const Ar1Fit white = fit_ar1(gen_ar1(n, 0.0, 1.0, {2024, 0}));
    CHECK(std::abs(white.phi) <= 0.01);

    const Ar1Fit persistent = fit_ar1(gen_ar1(n, 0.7, 0.5, {2024, 1}));
    CHECK(persistent.phi >= 0.69);
    CHECK(persistent.phi <= 0.71);
    CHECK(persistent.sigma == doctest::Approx(0.5).epsilon(0.03));

    CHECK_THROWS_AS(fit_ar1(std::vector<double>(10, 1.0)), NumericError);
    CHECK_THROWS_AS(fit_ar1({1.0, 2.0}), UsageError);
}

TEST_CASE("significance is deterministic and flags a self pair") {
    const std::size_t n = 192;
    const std::vector<double> x = gen_ar1(n, 0.3, 1.0, {7, 0});
    std::vector<double> y = x;
    // Make y a noisy copy so the fit does not degenerate.
    CounterRng rng(8);
    for (auto& v : y) v += 0.05 * rng.next_normal();

    const ScaleGrid grid = default_scale_grid(n);
    McParams params;
    params.n_sim = 100;
    params.seed = 31337;
    params.threads = 2;

    const SignificanceResult a = significance_mc(x, y, grid, params);
    params.threads = 1;
    const SignificanceResult b = significance_mc(x, y, grid, params);
    REQUIRE(a.thresholds.size() == b.thresholds.size());
    for (std::size_t k = 0; k < a.thresholds.size(); ++k) {
        CHECK(a.thresholds[k] == b.thresholds[k]); // bitwise: same pool, same sort
    }
    CHECK(a.significant.data() == b.significant.data());

    // A near-duplicated pair is significant on most trusted cells.
    const CoherenceField field = wavelet_coherence(x, y, grid);
    std::size_t trusted = 0;
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t u = 0; u < n; ++u) {
            if (!field.trusted(k, u)) continue;
            ++trusted;
            flagged += a.significant(k, u);
        }
    }
    CHECK(trusted > 0);
    CHECK(static_cast<double>(flagged) > 0.9 * static_cast<double>(trusted));
}

TEST_CASE("significance size smoke test on an independent pair") {
    const std::size_t n = 256;
    const std::vector<double> x = gen_ar1(n, 0.5, 1.0, {91, 0});
    const std::vector<double> y = gen_ar1(n, 0.5, 1.0, {92, 0});
    const ScaleGrid grid = default_scale_grid(n);

    McParams params;
    params.n_sim = 120;
    params.alpha = 0.05;
    params.seed = 5150;

    const SignificanceResult res = significance_mc(x, y, grid, params);
    const std::vector<double> coi = cone_of_influence(n, grid.dt, grid);
    std::size_t trusted = 0;
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t u = 0; u < n; ++u) {
            if (grid.fourier_period(k) >= coi[u]) continue;
            ++trusted;
            flagged += res.significant(k, u);
        }
    }
    const double fraction = static_cast<double>(flagged) / static_cast<double>(trusted);
    // Loose band for a single small-sample trial; the acceptance suite
    // checks the calibrated size.
    CHECK(fraction <= 0.20);
}

TEST_CASE("significance_mc validates its parameters") {
    const std::vector<double> x = random_series(64, 3);
    const std::vector<double> y = random_series(64, 4);
    const ScaleGrid grid = default_scale_grid(64);
    McParams params;
    params.n_sim = 50;
    CHECK_THROWS_AS(significance_mc(x, y, grid, params), UsageError);
    params.n_sim = 100;
    params.alpha = 1.5;
    CHECK_THROWS_AS(significance_mc(x, y, grid, params), UsageError);
}

TEST_CASE("quantile uses linear interpolation between order statistics") {
    CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_type7({4.0, 1.0, 3.0, 2.0}, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_type7({4.0, 1.0, 3.0, 2.0}, 1.0) == doctest::Approx(4.0));
    CHECK(quantile_type7({1.0, 2.0, 3.0}, 0.75) == doctest::Approx(2.5));
    CHECK(quantile_type7({5.0}, 0.3) == doctest::Approx(5.0));
}
