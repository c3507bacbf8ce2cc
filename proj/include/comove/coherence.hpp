#pragma once

#include "comove/cwt.hpp"
#include "comove/matrix.hpp"
#include "comove/scale_grid.hpp"

#include <cstdint>
#include <vector>

namespace comove {

/// Cross wavelet spectrum W_x * conj(W_y) on a shared grid.
struct CrossField {
    ComplexMatrix values;
    ScaleGrid grid;
};

CrossField cross_wavelet(const CwtField& wx, const CwtField& wy);

/// Squared coherence in [0, 1], phase difference in (-pi, pi], and the
/// Monte Carlo significance mask where one was computed.
struct CoherenceField {
    RealMatrix r2;
    RealMatrix phase;
    BoolMatrix significant;
    std::vector<double> thresholds; // per-scale MC quantile; empty if not run
    std::vector<double> coi;
    ScaleGrid grid;
    double alpha = 0.0; // 0 until significance is attached

    bool trusted(std::size_t k, std::size_t u) const {
        return grid.fourier_period(k) < coi[u];
    }
};

/// Smoothing operator used by the coherence estimator: per-row Gaussian in
/// time with width equal to the row's scale (support truncated at 4 scale
/// units, kernel renormalized to unit sum over the in-range support),
/// followed by a boxcar across scales spanning 0.6 octave (rounded to an
/// odd row count, edge-renormalized).
RealMatrix smooth(const RealMatrix& field, const ScaleGrid& grid);
ComplexMatrix smooth(const ComplexMatrix& field, const ScaleGrid& grid);

/// Squared wavelet coherence of two equal-length series:
///   R2 = |S(W_xy / s)|^2 / (S(|W_x|^2 / s) * S(|W_y|^2 / s))
/// with S the smoothing operator above; phase is the angle of the smoothed
/// cross spectrum. No significance mask is attached here.
CoherenceField wavelet_coherence(const std::vector<double>& x, const std::vector<double>& y,
                                 const ScaleGrid& grid);

/// Eight-sector phase-arrow classification. Right = in phase, left =
/// anti-phase, down = first series leads by pi/2, up = second leads.
enum class ArrowClass : int {
    right = 0,
    up_right = 1,
    up = 2,
    up_left = 3,
    left = 4,
    down_left = 5,
    down = 6,
    down_right = 7,
};

ArrowClass phase_to_arrow(double phase);
const char* arrow_name(ArrowClass arrow);

/// AR(1) parameters fitted by lag-1 autocorrelation.
struct Ar1Fit {
    double phi = 0.0;
    double sigma = 0.0;
};

Ar1Fit fit_ar1(const std::vector<double>& x);

/// Monte Carlo significance parameters. threads = 0 means use the hardware
/// concurrency; the result does not depend on the thread count.
struct McParams {
    std::size_t n_sim = 300;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct SignificanceResult {
    std::vector<double> thresholds; // per scale; +inf where no cell is trusted
    BoolMatrix significant;         // r2 > threshold at the cell's scale
};

/// Fits AR(1) nulls to x and y, simulates n_sim independent surrogate
/// pairs, and takes the per-scale (1 - alpha) quantile of surrogate r2
/// pooled over trusted time points. Deterministic given the seed for any
/// thread count. precomputed_r2, when given, must be the coherence of
/// (x, y) on the same grid and is masked instead of being recomputed.
SignificanceResult significance_mc(const std::vector<double>& x, const std::vector<double>& y,
                                   const ScaleGrid& grid, const McParams& params,
                                   const RealMatrix* precomputed_r2 = nullptr);

/// Quantile with linear interpolation between order statistics (type 7).
double quantile_type7(std::vector<double> values, double q);

} // namespace comove
