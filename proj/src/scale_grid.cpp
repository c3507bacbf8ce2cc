#include "comove/scale_grid.hpp"

#include "comove/errors.hpp"

#include <cmath>

namespace comove {

double morlet_fourier_factor(double omega0) {
    return 4.0 * M_PI / (omega0 + std::sqrt(2.0 + omega0 * omega0));
}

bool ScaleGrid::same_axis(const ScaleGrid& other) const {
    return dt == other.dt && s0 == other.s0 && dj == other.dj && omega0 == other.omega0 &&
           scales.size() == other.scales.size();
}

ScaleGrid make_scale_grid(double dt, double s0, double dj, std::size_t n_scales,
                          double omega0) {
    if (!(dt > 0.0)) throw UsageError("scale grid: dt must be positive");
    if (!(s0 >= 2.0 * dt)) throw UsageError("scale grid: s0 must be at least 2*dt");
    if (!(dj > 0.0)) throw UsageError("scale grid: dj must be positive");
    if (n_scales < 1) throw UsageError("scale grid: need at least one scale");
    if (!(omega0 > 0.0)) throw UsageError("scale grid: omega0 must be positive");

    ScaleGrid grid;
    grid.dt = dt;
    grid.s0 = s0;
    grid.dj = dj;
    grid.omega0 = omega0;
    grid.fourier_factor = morlet_fourier_factor(omega0);
    grid.scales.resize(n_scales);
    for (std::size_t k = 0; k < n_scales; ++k) {
        grid.scales[k] = s0 * std::pow(2.0, static_cast<double>(k) * dj);
    }
    return grid;
}

std::size_t default_scale_count(std::size_t n, double dt, double s0, double dj,
                                double omega0) {
    const double ff = morlet_fourier_factor(omega0);
    const double max_scale = static_cast<double>(n) * dt / 2.0 / ff;
    if (max_scale <= s0) return 1;
    const double k_max = std::log2(max_scale / s0) / dj;
    return static_cast<std::size_t>(std::floor(k_max)) + 1;
}

ScaleGrid default_scale_grid(std::size_t n, double dt, double omega0) {
    const double s0 = 2.0 * dt;
    const double dj = 1.0 / 12.0;
    return make_scale_grid(dt, s0, dj, default_scale_count(n, dt, s0, dj, omega0), omega0);
}

std::vector<double> cone_of_influence(std::size_t n, double dt, const ScaleGrid& grid) {
    if (n < 1) throw UsageError("cone_of_influence: n must be at least 1");
    std::vector<double> coi(n);
    const double c = grid.fourier_factor * std::sqrt(2.0) * dt;
    for (std::size_t u = 0; u < n; ++u) {
        const double left = static_cast<double>(u) + 0.5;
        const double right = static_cast<double>(n - u) - 0.5;
        coi[u] = c * std::min(left, right);
    }
    return coi;
}

} // namespace comove
