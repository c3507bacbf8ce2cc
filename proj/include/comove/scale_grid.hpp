#pragma once

#include <cstddef>
#include <vector>

namespace comove {

/// Logarithmic scale axis for the continuous transform: scales
/// s_k = s0 * 2^(k*dj). fourier_factor converts a scale to its equivalent
/// Fourier period for the Morlet wavelet with center frequency omega0.
struct ScaleGrid {
    double dt = 1.0;
    double s0 = 2.0;
    double dj = 1.0 / 12.0;
    double omega0 = 6.0;
    double fourier_factor = 0.0;
    std::vector<double> scales;

    std::size_t size() const { return scales.size(); }
    double fourier_period(std::size_t k) const { return fourier_factor * scales[k]; }
    bool same_axis(const ScaleGrid& other) const;
};

/// 4*pi / (omega0 + sqrt(2 + omega0^2)); about 1.0330 for omega0 = 6.
double morlet_fourier_factor(double omega0);

/// Builds the grid; requires dt > 0, s0 >= 2*dt, dj > 0, n_scales >= 1.
ScaleGrid make_scale_grid(double dt, double s0, double dj, std::size_t n_scales,
                          double omega0 = 6.0);

/// Number of scales so the largest Fourier period stays <= n*dt/2.
std::size_t default_scale_count(std::size_t n, double dt, double s0, double dj,
                                double omega0 = 6.0);

/// Convenience: grid with the default s0 = 2*dt, dj = 1/12 and the default
/// scale count for a series of length n.
ScaleGrid default_scale_grid(std::size_t n, double dt = 1.0, double omega0 = 6.0);

/// Maximum trustworthy Fourier period per time point:
/// coi(u) = fourier_factor * sqrt(2) * dt * min(u + 0.5, n - u - 0.5).
std::vector<double> cone_of_influence(std::size_t n, double dt, const ScaleGrid& grid);

} // namespace comove
