#pragma once

#include "comove/matrix.hpp"
#include "comove/scale_grid.hpp"

#include <memory>
#include <vector>

namespace comove {

/// Morlet CWT coefficients, one row per scale, one column per time point.
/// coi holds the maximum trustworthy Fourier period per column.
struct CwtField {
    ComplexMatrix coefficients;
    ScaleGrid grid;
    std::vector<double> coi;
    std::size_t n_original = 0;

    /// True where the Fourier period of scale row k is inside the
    /// trustworthy region at column u.
    bool trusted(std::size_t k, std::size_t u) const {
        return grid.fourier_period(k) < coi[u];
    }
};

/// Continuous Morlet transform of a real series on the given scale grid.
///
/// The series mean is removed, the series is zero-padded to a power of two
/// large enough that circular wrap-around of the widest wavelet is below
/// double precision, and each scale row is the inverse FFT of the spectrum
/// multiplied by the wavelet window. The result is truncated back to the
/// input length and normalized so that
///   W(u, s) = sum_t x_t * (dt / sqrt(s)) * conj(psi((t - u) * dt / s))
/// with psi(eta) = pi^(-1/4) * exp(i*omega0*eta) * exp(-eta^2 / 2).
CwtField morlet_cwt(const std::vector<double>& x, const ScaleGrid& grid);

namespace detail {

/// Row-at-a-time transform engine behind morlet_cwt; also drives the
/// coherence estimator so coefficients never need to be materialized as a
/// full matrix. Not thread-safe; build one per thread.
class MorletEngine {
public:
    MorletEngine(const std::vector<double>& x, const ScaleGrid& grid);
    ~MorletEngine();
    MorletEngine(MorletEngine&&) noexcept;
    MorletEngine& operator=(MorletEngine&&) noexcept;

    /// Writes the n coefficients of scale row k.
    void row(std::size_t k, std::complex<double>* out);

    std::size_t length() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace detail

} // namespace comove
