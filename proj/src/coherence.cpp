#include "comove/coherence.hpp"

#include "comove/errors.hpp"
#include "comove/fft.hpp"
#include "comove/rng.hpp"
#include "comove/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

namespace comove {

CrossField cross_wavelet(const CwtField& wx, const CwtField& wy) {
    if (!wx.grid.same_axis(wy.grid) || !wx.coefficients.same_shape(wy.coefficients)) {
        throw UsageError("cross_wavelet: fields live on different grids");
    }
    CrossField cross;
    cross.grid = wx.grid;
    cross.values = ComplexMatrix(wx.coefficients.rows(), wx.coefficients.cols());
    const auto& a = wx.coefficients.data();
    const auto& b = wy.coefficients.data();
    auto& out = cross.values.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a[i] * std::conj(b[i]);
    }
    return cross;
}

namespace {

// Gaussian support radius in bars; weights below exp(-8) are dropped and
// the kernel is renormalized over what remains.
double gaussian_radius(double scale_bars) {
    return std::ceil(4.0 * scale_bars);
}

std::size_t boxcar_rows(double dj) {
    const double target = 0.6 / dj;
    const double half = (target - 1.0) / 2.0;
    if (half <= 0.0) return 1;
    return 2 * static_cast<std::size_t>(std::lround(half)) + 1;
}

// Precomputed per-(grid, n) machinery for the smoothing operator: kernel
// spectra for linear convolution by FFT and the edge renormalization row.
struct SmoothingPlan {
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t box_rows = 1;
    std::vector<std::size_t> fft_len;
    std::vector<std::vector<std::complex<double>>> kernel_spectrum;
    std::vector<std::vector<double>> norm;
};

std::shared_ptr<const SmoothingPlan> build_plan(const ScaleGrid& grid, std::size_t n) {
    auto plan = std::make_shared<SmoothingPlan>();
    plan->n = n;
    plan->rows = grid.size();
    plan->box_rows = boxcar_rows(grid.dj);
    plan->fft_len.resize(grid.size());
    plan->kernel_spectrum.resize(grid.size());
    plan->norm.resize(grid.size());

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s_bars = grid.scales[k] / grid.dt;
        const auto radius = static_cast<std::size_t>(gaussian_radius(s_bars));
        std::vector<double> half_kernel(radius + 1);
        for (std::size_t i = 0; i <= radius; ++i) {
            const double u = static_cast<double>(i);
            half_kernel[i] = std::exp(-u * u / (2.0 * s_bars * s_bars));
        }

        const std::size_t m = next_pow2(n + 2 * radius + 1);
        plan->fft_len[k] = m;
        std::vector<std::complex<double>> spec(m, {0.0, 0.0});
        spec[0] = half_kernel[0];
        for (std::size_t i = 1; i <= radius; ++i) {
            spec[i] += half_kernel[i];
            spec[m - i] += half_kernel[i];
        }
        fft_forward(spec.data(), m);
        plan->kernel_spectrum[k] = std::move(spec);

        std::vector<double> cum(radius + 1);
        double acc = 0.0;
        for (std::size_t i = 0; i <= radius; ++i) {
            acc += half_kernel[i];
            cum[i] = acc;
        }
        std::vector<double> norm(n);
        for (std::size_t u = 0; u < n; ++u) {
            const std::size_t left = std::min<std::size_t>(radius, u);
            const std::size_t right = std::min<std::size_t>(radius, n - 1 - u);
            norm[u] = cum[left] + cum[right] - half_kernel[0];
        }
        plan->norm[k] = std::move(norm);
    }
    return plan;
}

std::shared_ptr<const SmoothingPlan> plan_for(const ScaleGrid& grid, std::size_t n) {
    using Key = std::tuple<std::size_t, double, double, double, double, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const SmoothingPlan>> cache;
    const Key key{n, grid.dt, grid.s0, grid.dj, grid.omega0, grid.size()};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto plan = build_plan(grid, n);
    if (cache.size() > 16) cache.clear();
    cache.emplace(key, plan);
    return plan;
}

// Out-of-place convolution buffers per FFT length. The input tail beyond
// the row length is zeroed once and stays zero, so each row only writes
// its n leading values.
struct ConvBuffers {
    std::vector<std::complex<double>> in;
    std::vector<std::complex<double>> mid;
    std::vector<std::complex<double>> out;
};

class ConvWorkspace {
public:
    ConvBuffers& at(std::size_t m) {
        auto it = buffers_.find(m);
        if (it == buffers_.end()) {
            it = buffers_.emplace(m, ConvBuffers{}).first;
            it->second.in.assign(m, {0.0, 0.0});
            it->second.mid.resize(m);
            it->second.out.resize(m);
        }
        return it->second;
    }

private:
    std::map<std::size_t, ConvBuffers> buffers_;
};

// Time smoothing of one row: linear convolution with the scale's kernel by
// out-of-place FFTs, then division by the truncated-kernel mass.
void smooth_row_ws(const std::complex<double>* in, std::complex<double>* out,
                   const SmoothingPlan& plan, std::size_t k, ConvWorkspace& ws) {
    const std::size_t n = plan.n;
    const std::size_t m = plan.fft_len[k];
    ConvBuffers& buf = ws.at(m);
    std::copy(in, in + n, buf.in.begin());
    fft_forward(buf.in.data(), buf.mid.data(), m);
    const auto& spec = plan.kernel_spectrum[k];
    for (std::size_t i = 0; i < m; ++i) buf.mid[i] *= spec[i];
    fft_inverse(buf.mid.data(), buf.out.data(), m);
    const auto& norm = plan.norm[k];
    for (std::size_t u = 0; u < n; ++u) out[u] = buf.out[u] / norm[u];
}

// Edge-renormalized boxcar across scales, in place.
void boxcar_rows(ComplexMatrix& field, std::size_t box_rows) {
    if (box_rows <= 1) return;
    const std::size_t half = box_rows / 2;
    const std::size_t rows = field.rows();
    const std::size_t cols = field.cols();
    ComplexMatrix out(rows, cols);
    for (std::size_t k = 0; k < rows; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(rows - 1, k + half);
        const double inv_count = 1.0 / static_cast<double>(hi - lo + 1);
        for (std::size_t u = 0; u < cols; ++u) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t r = lo; r <= hi; ++r) acc += field(r, u);
            out(k, u) = acc * inv_count;
        }
    }
    field = std::move(out);
}

ComplexMatrix smooth_with_plan(const ComplexMatrix& field, const SmoothingPlan& plan) {
    ComplexMatrix out(field.rows(), field.cols());
    ConvWorkspace ws;
    for (std::size_t k = 0; k < field.rows(); ++k) {
        smooth_row_ws(field.row(k), out.row(k), plan, k, ws);
    }
    boxcar_rows(out, plan.box_rows);
    return out;
}

struct CoherenceCore {
    RealMatrix r2;
    ComplexMatrix smoothed_cross;
};

// Fused estimator: coefficients are produced, combined and time-smoothed
// one scale row at a time. The two real power rows travel through one
// complex convolution (the kernel spectrum is real, so the real and
// imaginary lanes never mix).
CoherenceCore coherence_core(const std::vector<double>& x, const std::vector<double>& y,
                             const ScaleGrid& grid) {
    if (x.size() != y.size()) throw UsageError("wavelet_coherence: length mismatch");

    detail::MorletEngine engine_x(x, grid);
    detail::MorletEngine engine_y(y, grid);
    const std::size_t rows = grid.size();
    const std::size_t cols = x.size();
    const auto plan = plan_for(grid, cols);

    ComplexMatrix s_cross(rows, cols);
    ComplexMatrix s_power(rows, cols); // real lane |W_x|^2/s, imag lane |W_y|^2/s
    std::vector<std::complex<double>> wx_row(cols);
    std::vector<std::complex<double>> wy_row(cols);
    std::vector<std::complex<double>> cross_row(cols);
    std::vector<std::complex<double>> power_row(cols);
    ConvWorkspace ws;

    for (std::size_t k = 0; k < rows; ++k) {
        engine_x.row(k, wx_row.data());
        engine_y.row(k, wy_row.data());
        const double inv_s = 1.0 / grid.scales[k];
        for (std::size_t u = 0; u < cols; ++u) {
            cross_row[u] = wx_row[u] * std::conj(wy_row[u]) * inv_s;
            power_row[u] = {std::norm(wx_row[u]) * inv_s, std::norm(wy_row[u]) * inv_s};
        }
        smooth_row_ws(cross_row.data(), s_cross.row(k), *plan, k, ws);
        smooth_row_ws(power_row.data(), s_power.row(k), *plan, k, ws);
    }

    boxcar_rows(s_cross, plan->box_rows);
    boxcar_rows(s_power, plan->box_rows);

    CoherenceCore core;
    core.r2 = RealMatrix(rows, cols);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t u = 0; u < cols; ++u) {
            const double denom = s_power(k, u).real() * s_power(k, u).imag();
            double value = 0.0;
            if (denom > 0.0) {
                value = std::norm(s_cross(k, u)) / denom;
            }
            core.r2(k, u) = std::clamp(value, 0.0, 1.0);
        }
    }
    core.smoothed_cross = std::move(s_cross);
    return core;
}

double series_variance(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / n;
}

} // namespace

RealMatrix smooth(const RealMatrix& field, const ScaleGrid& grid) {
    if (field.rows() != grid.size()) throw UsageError("smooth: row count must match grid");
    ComplexMatrix tmp(field.rows(), field.cols());
    for (std::size_t i = 0; i < field.data().size(); ++i) {
        tmp.data()[i] = {field.data()[i], 0.0};
    }
    const auto plan = plan_for(grid, field.cols());
    ComplexMatrix smoothed = smooth_with_plan(tmp, *plan);
    RealMatrix out(field.rows(), field.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i) {
        out.data()[i] = smoothed.data()[i].real();
    }
    return out;
}

ComplexMatrix smooth(const ComplexMatrix& field, const ScaleGrid& grid) {
    if (field.rows() != grid.size()) throw UsageError("smooth: row count must match grid");
    const auto plan = plan_for(grid, field.cols());
    return smooth_with_plan(field, *plan);
}

CoherenceField wavelet_coherence(const std::vector<double>& x, const std::vector<double>& y,
                                 const ScaleGrid& grid) {
    if (x.size() != y.size()) throw UsageError("wavelet_coherence: length mismatch");
    if (!(series_variance(x) > 0.0) || !(series_variance(y) > 0.0)) {
        throw NumericError("wavelet_coherence: zero-variance input");
    }

    CoherenceCore core = coherence_core(x, y, grid);
    CoherenceField field;
    field.grid = grid;
    field.coi = cone_of_influence(x.size(), grid.dt, grid);
    field.r2 = std::move(core.r2);
    field.phase = RealMatrix(grid.size(), x.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t u = 0; u < x.size(); ++u) {
            const auto c = core.smoothed_cross(k, u);
            field.phase(k, u) = std::atan2(c.imag(), c.real());
        }
    }
    field.significant = BoolMatrix(grid.size(), x.size(), 0);
    return field;
}

ArrowClass phase_to_arrow(double phase) {
    if (!(phase > -M_PI - 1e-12 && phase <= M_PI + 1e-12)) {
        throw UsageError("phase_to_arrow: phase must lie in (-pi, pi]");
    }
    long k = std::lround(phase / (M_PI / 4.0));
    k = ((k % 8) + 8) % 8;
    return static_cast<ArrowClass>(k);
}

const char* arrow_name(ArrowClass arrow) {
    switch (arrow) {
        case ArrowClass::right: return "right";
        case ArrowClass::up_right: return "up_right";
        case ArrowClass::up: return "up";
        case ArrowClass::up_left: return "up_left";
        case ArrowClass::left: return "left";
        case ArrowClass::down_left: return "down_left";
        case ArrowClass::down: return "down";
        case ArrowClass::down_right: return "down_right";
    }
    return "right";
}

Ar1Fit fit_ar1(const std::vector<double>& x) {
    if (x.size() < 3) throw UsageError("fit_ar1: need at least 3 observations");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double c0 = 0.0;
    double c1 = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - mean;
        c0 += d * d;
        if (t > 0) c1 += d * (x[t - 1] - mean);
    }
    if (!(c0 > 0.0)) throw NumericError("fit_ar1: constant series");

    Ar1Fit fit;
    fit.phi = std::clamp(c1 / c0, -0.999, 0.999);
    fit.sigma = std::sqrt((c0 / n) * (1.0 - fit.phi * fit.phi));
    return fit;
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw UsageError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

SignificanceResult significance_mc(const std::vector<double>& x, const std::vector<double>& y,
                                   const ScaleGrid& grid, const McParams& params,
                                   const RealMatrix* precomputed_r2) {
    if (params.n_sim < 100) throw UsageError("significance_mc: n_sim must be >= 100");
    if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
        throw UsageError("significance_mc: alpha must lie in (0, 1)");
    }
    if (x.size() != y.size()) throw UsageError("significance_mc: length mismatch");

    const std::size_t n = x.size();
    const std::size_t rows = grid.size();
    const Ar1Fit fx = fit_ar1(x);
    const Ar1Fit fy = fit_ar1(y);
    const std::vector<double> coi = cone_of_influence(n, grid.dt, grid);

    // Trusted columns form one contiguous run per scale.
    std::vector<std::size_t> u_lo(rows);
    std::vector<std::size_t> u_count(rows, 0);
    for (std::size_t k = 0; k < rows; ++k) {
        const double period = grid.fourier_period(k);
        std::size_t lo = n;
        std::size_t hi = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (period < coi[u]) {
                lo = std::min(lo, u);
                hi = u;
            }
        }
        if (lo < n) {
            u_lo[k] = lo;
            u_count[k] = hi - lo + 1;
        }
    }

    // Per-replicate slices keep the pool layout independent of scheduling.
    std::vector<std::vector<double>> pools(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        pools[k].resize(u_count[k] * params.n_sim);
    }

    unsigned threads = params.threads != 0 ? params.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(params.n_sim)));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= params.n_sim) break;
            const std::uint64_t rep_seed = child_seed(params.seed, i);
            const std::vector<double> sx = gen_ar1(n, fx.phi, fx.sigma, {rep_seed, 0});
            const std::vector<double> sy = gen_ar1(n, fy.phi, fy.sigma, {rep_seed, 1});
            const CoherenceCore core = coherence_core(sx, sy, grid);
            for (std::size_t k = 0; k < rows; ++k) {
                double* slot = pools[k].data() + i * u_count[k];
                const double* row = core.r2.row(k);
                for (std::size_t u = 0; u < u_count[k]; ++u) {
                    slot[u] = row[u_lo[k] + u];
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> group;
        group.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) group.emplace_back(worker);
        for (auto& th : group) th.join();
    }

    SignificanceResult result;
    result.thresholds.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        if (pools[k].empty()) {
            result.thresholds[k] = std::numeric_limits<double>::infinity();
        } else {
            result.thresholds[k] = quantile_type7(std::move(pools[k]), 1.0 - params.alpha);
        }
    }

    RealMatrix actual;
    if (precomputed_r2 != nullptr) {
        if (precomputed_r2->rows() != rows || precomputed_r2->cols() != n) {
            throw UsageError("significance_mc: precomputed r2 has the wrong shape");
        }
        actual = *precomputed_r2;
    } else {
        actual = coherence_core(x, y, grid).r2;
    }
    result.significant = BoolMatrix(rows, n, 0);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t u = 0; u < n; ++u) {
            result.significant(k, u) = actual(k, u) > result.thresholds[k] ? 1 : 0;
        }
    }
    return result;
}

} // namespace comove
