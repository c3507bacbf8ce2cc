#pragma once

#include <complex>
#include <cstddef>

namespace comove {

/// Complex FFT, FFTW convention: forward is unnormalized, inverse applies
/// the 1/n factor. Plans are cached per length and created
/// deterministically (FFTW_ESTIMATE), so repeated runs produce identical
/// output; execution is thread-safe. The out-of-place variants leave the
/// input untouched.
void fft_forward(std::complex<double>* data, std::size_t n);
void fft_inverse(std::complex<double>* data, std::size_t n);
void fft_forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);
void fft_inverse(const std::complex<double>* in, std::complex<double>* out, std::size_t n);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

} // namespace comove
