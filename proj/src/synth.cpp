#include "comove/synth.hpp"

#include "comove/errors.hpp"

#include <cmath>
#include <numeric>

namespace comove {

std::vector<double> gen_ar1(std::size_t n, double phi, double sigma, SeedSpec seed) {
    if (n < 1) throw UsageError("gen_ar1: n must be >= 1");
    if (!(std::abs(phi) < 1.0)) throw UsageError("gen_ar1: |phi| must be < 1");
    if (!(sigma > 0.0)) throw UsageError("gen_ar1: sigma must be positive");

    CounterRng rng(seed);
    std::vector<double> x(n);
    x[0] = rng.next_normal() * sigma / std::sqrt(1.0 - phi * phi);
    for (std::size_t t = 1; t < n; ++t) {
        x[t] = phi * x[t - 1] + sigma * rng.next_normal();
    }
    return x;
}

namespace {

double sample_sd(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / n);
}

void mix_band(std::vector<double>& target, const std::vector<double>& base,
              const std::vector<double>& noise, double rho) {
    const double sd_base = sample_sd(base);
    const double sd_noise = sample_sd(noise);
    const double match = sd_noise > 0.0 ? sd_base / sd_noise : 0.0;
    const double w_noise = std::sqrt(1.0 - rho * rho) * match;
    for (std::size_t t = 0; t < base.size(); ++t) {
        target[t] = rho * base[t] + w_noise * noise[t];
    }
}

// Squared gain of the equivalent filter per band on a frequency grid over
// (0, 1/2): levels 1..J, then the level-J scaling band. The bands overlap,
// so they sum to one at every frequency but are not disjoint.
std::vector<std::vector<double>> band_gains(const WaveletFilter& filter, std::size_t levels,
                                            std::size_t n_freq) {
    auto gain_at = [](const std::vector<double>& taps, double f) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t l = 0; l < taps.size(); ++l) {
            const double w = 2.0 * M_PI * f * static_cast<double>(l);
            re += taps[l] * std::cos(w) / std::sqrt(2.0);
            im -= taps[l] * std::sin(w) / std::sqrt(2.0);
        }
        return re * re + im * im;
    };

    std::vector<std::vector<double>> gains(levels + 1, std::vector<double>(n_freq));
    for (std::size_t i = 0; i < n_freq; ++i) {
        const double f = (static_cast<double>(i) + 0.5) / (2.0 * static_cast<double>(n_freq));
        double low_product = 1.0;
        for (std::size_t j = 1; j <= levels; ++j) {
            const double fj = std::pow(2.0, static_cast<double>(j - 1)) * f;
            gains[j - 1][i] = gain_at(filter.h, fj) * low_product;
            low_product *= gain_at(filter.g, fj);
        }
        gains[levels][i] = low_product;
    }
    return gains;
}

// Wavelet correlations produced by mixing the bands of white noise with
// weights `mix`: band spectra a(f) = sum_b mix_b g_b(f) for the common
// component, c(f) = sum_b sqrt(1 - mix_b^2) g_b(f) for the independent one.
std::vector<double> predicted_correlations(const std::vector<std::vector<double>>& gains,
                                           const std::vector<double>& mix,
                                           std::size_t levels) {
    const std::size_t n_freq = gains[0].size();
    std::vector<double> a(n_freq, 0.0);
    std::vector<double> c(n_freq, 0.0);
    for (std::size_t b = 0; b < gains.size(); ++b) {
        const double wa = mix[b];
        const double wc = std::sqrt(std::max(0.0, 1.0 - mix[b] * mix[b]));
        for (std::size_t i = 0; i < n_freq; ++i) {
            a[i] += wa * gains[b][i];
            c[i] += wc * gains[b][i];
        }
    }
    std::vector<double> out(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        double cov = 0.0;
        double var_x = 0.0;
        double var_y = 0.0;
        for (std::size_t i = 0; i < n_freq; ++i) {
            cov += gains[j][i] * a[i];
            var_x += gains[j][i];
            var_y += gains[j][i] * (a[i] * a[i] + c[i] * c[i]);
        }
        out[j] = cov / std::sqrt(var_x * var_y);
    }
    return out;
}

// The inverse transform blurs per-band mixing across neighbouring scales
// (the equivalent filters overlap in frequency), so mixing with the raw
// targets would bias the measured correlations. Solve for effective
// weights whose predicted correlations hit the targets instead. Targets at
// +-1 saturate and are honoured as closely as the overlap allows.
std::vector<double> solve_mix_weights(const std::vector<double>& target,
                                      const WaveletFilter& filter) {
    const std::size_t levels = target.size();
    const auto gains = band_gains(filter, levels, 2048);

    std::vector<double> mix(levels + 1);
    for (std::size_t j = 0; j < levels; ++j) mix[j] = target[j];
    mix[levels] = target.back();

    for (int iter = 0; iter < 200; ++iter) {
        const std::vector<double> predicted = predicted_correlations(gains, mix, levels);
        double max_residual = 0.0;
        for (std::size_t j = 0; j < levels; ++j) {
            const double residual = target[j] - predicted[j];
            max_residual = std::max(max_residual, std::abs(residual));
            mix[j] = std::clamp(mix[j] + residual, -1.0, 1.0);
        }
        mix[levels] = mix[levels - 1];
        if (max_residual < 1e-12) break;
    }
    // sqrt(1 - m^2) amplifies a 1e-15 residual into 1e-8 noise weight, so
    // snap essentially saturated weights to keep degenerate targets exact.
    for (double& m : mix) {
        if (std::abs(m) > 1.0 - 1e-12) m = m > 0.0 ? 1.0 : -1.0;
    }
    return mix;
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> gen_correlated_pair(
    std::size_t n, const std::vector<double>& rho_by_scale, const WaveletFilter& filter,
    SeedSpec seed) {
    if (rho_by_scale.empty()) throw UsageError("gen_correlated_pair: empty rho vector");
    for (double rho : rho_by_scale) {
        if (!(std::abs(rho) <= 1.0)) {
            throw UsageError("gen_correlated_pair: each |rho_j| must be <= 1");
        }
    }
    const std::size_t levels = rho_by_scale.size();
    if (n < (std::size_t{1} << levels)) {
        throw UsageError("gen_correlated_pair: series too short for requested levels");
    }

    CounterRng rng_x(SeedSpec{seed.master_seed, seed.stream_id * 2});
    CounterRng rng_z(SeedSpec{seed.master_seed, seed.stream_id * 2 + 1});
    std::vector<double> x(n);
    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = rng_x.next_normal();
    for (std::size_t t = 0; t < n; ++t) z[t] = rng_z.next_normal();

    const ModwtDecomposition dx = modwt(x, filter, levels);
    const ModwtDecomposition dz = modwt(z, filter, levels);
    const std::vector<double> mix = solve_mix_weights(rho_by_scale, filter);

    ModwtDecomposition dy = dx;
    for (std::size_t j = 0; j < levels; ++j) {
        mix_band(dy.w[j], dx.w[j], dz.w[j], mix[j]);
    }
    mix_band(dy.v, dx.v, dz.v, mix[levels]);

    return {std::move(x), imodwt(dy)};
}

CwtField morlet_cwt_direct(const std::vector<double>& x, const ScaleGrid& grid) {
    const std::size_t n = x.size();
    if (n < 4) throw UsageError("morlet_cwt_direct: series must have at least 4 samples");
    if (n > 2048) {
        throw UsageError("morlet_cwt_direct: series too long for O(n^2) evaluation");
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw NumericError("morlet_cwt_direct: non-finite input");
    }

    const double dt = grid.dt;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t t = 0; t < n; ++t) centered[t] = x[t] - mean;

    CwtField field;
    field.grid = grid;
    field.n_original = n;
    field.coi = cone_of_influence(n, dt, grid);
    field.coefficients = ComplexMatrix(grid.size(), n);

    const double pi_quarter = std::pow(M_PI, -0.25);
    // Sampled conjugate wavelet per signed offset m = t - u.
    std::vector<std::complex<double>> taps(2 * n - 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = grid.scales[k];
        const double amp = dt / std::sqrt(s) * pi_quarter;
        for (std::size_t i = 0; i < taps.size(); ++i) {
            const double m = static_cast<double>(i) - static_cast<double>(n - 1);
            const double eta = m * dt / s;
            const double envelope = amp * std::exp(-0.5 * eta * eta);
            taps[i] = {envelope * std::cos(grid.omega0 * eta),
                       -envelope * std::sin(grid.omega0 * eta)};
        }
        for (std::size_t u = 0; u < n; ++u) {
            std::complex<double> acc{0.0, 0.0};
            const std::size_t base = n - 1 - u;
            for (std::size_t t = 0; t < n; ++t) {
                acc += centered[t] * taps[base + t];
            }
            field.coefficients(k, u) = acc;
        }
    }
    return field;
}

} // namespace comove
