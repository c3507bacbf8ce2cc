#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace comove {

/// Orthonormal wavelet filter pair in DWT normalization: sum(g) = sqrt(2),
/// sum(h) = 0, unit energy each; the transform rescales by 1/sqrt(2)
/// internally. h is derived from g by the quadrature mirror relation.
struct WaveletFilter {
    std::string name;
    std::vector<double> h; // high-pass (wavelet)
    std::vector<double> g; // low-pass (scaling)

    std::size_t length() const { return g.size(); }
};

/// Filters by name: "haar", "d4", "la8".
WaveletFilter wavelet_filter(const std::string& name);

/// Width of the equivalent filter at level j: (2^j - 1)(L - 1) + 1.
std::size_t equivalent_filter_length(const WaveletFilter& filter, std::size_t level);

/// Indices {0 .. min(N, L_j - 1) - 1} of coefficients contaminated by the
/// circular boundary at level j.
std::vector<std::size_t> boundary_mask(std::size_t n, const WaveletFilter& filter,
                                       std::size_t level);

/// Maximal-overlap transform output: J wavelet vectors plus the final
/// scaling vector, all of length N (no decimation).
struct ModwtDecomposition {
    std::vector<std::vector<double>> w; // w[j-1] holds level j, length N
    std::vector<double> v;              // scaling coefficients at level J
    WaveletFilter filter;
    std::size_t levels = 0;

    std::size_t size() const { return v.size(); }
    std::size_t boundary_count(std::size_t level) const;
};

/// Pyramid algorithm with circular boundary. Energy is preserved exactly:
/// ||x||^2 = sum_j ||w_j||^2 + ||v_J||^2. Defined for any sample size.
/// Warns (optionally) when 2^J exceeds N.
ModwtDecomposition modwt(const std::vector<double>& x, const WaveletFilter& filter,
                         std::size_t levels, std::vector<std::string>* warnings = nullptr);

/// Inverse pyramid; reconstructs the analyzed series to ~1e-8 absolute.
std::vector<double> imodwt(const ModwtDecomposition& d);

/// Frequency band (cycles per bar) and time band for level j at sampling
/// interval dt: f in [1/2^(j+1), 1/2^j], horizon in [2^j, 2^(j+1)] * dt.
struct HorizonBand {
    double freq_low = 0.0;
    double freq_high = 0.0;
    double time_low = 0.0;
    double time_high = 0.0;
};

HorizonBand scale_to_horizon(std::size_t level, double dt);

/// Human-readable horizon, e.g. "10-20 min" or "3.3-6.6 days"; bands at or
/// beyond one trading day (default 385 min) are expressed in days.
std::string horizon_label(const HorizonBand& band, double trading_day_minutes = 385.0);

} // namespace comove
