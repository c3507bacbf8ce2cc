#pragma once

#include "comove/cwt.hpp"
#include "comove/modwt.hpp"
#include "comove/rng.hpp"

#include <utility>
#include <vector>

namespace comove {

/// Stationary AR(1): x_t = phi * x_{t-1} + eps_t, eps ~ N(0, sigma^2),
/// x_0 drawn from the stationary distribution N(0, sigma^2 / (1 - phi^2)).
/// Deterministic per seed spec.
std::vector<double> gen_ar1(std::size_t n, double phi, double sigma, SeedSpec seed);

/// Bivariate series whose wavelet correlation at level j approaches
/// rho_by_scale[j-1] as n grows. x is Gaussian white noise; y is rebuilt by
/// the inverse transform from per-scale mixtures
///   w_y(., j) = m_j * w_x(., j) + sqrt(1 - m_j^2) * w_z(., j) * sd-match
/// with z an independent white noise series and the scaling band mixed with
/// the deepest weight. The effective weights m_j are solved from the
/// filter's band overlap so that the measured correlations converge to the
/// requested targets rather than a blurred version of them; targets pinned
/// at +-1 on isolated bands saturate as closely as the overlap allows.
std::pair<std::vector<double>, std::vector<double>> gen_correlated_pair(
    std::size_t n, const std::vector<double>& rho_by_scale, const WaveletFilter& filter,
    SeedSpec seed);

/// Reference Morlet transform by explicit time-domain summation,
///   W(u, s) = sum_t x~_t * (dt / sqrt(s)) * conj(psi((t - u) * dt / s)),
/// on the mean-removed series x~. O(n^2 * K); guarded to n <= 2048.
/// Kept free of any FFT so it can cross-check the frequency-domain path.
CwtField morlet_cwt_direct(const std::vector<double>& x, const ScaleGrid& grid);

} // namespace comove
