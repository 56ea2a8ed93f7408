#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Thin FFTW-backed helpers for magnitude/power spectra. Plan creation is
// serialized internally (FFTW planning is not thread safe).

namespace pulselink::spectral {

std::size_t next_pow2(std::size_t n);

// |rfft(x, nfft)|, nfft/2+1 bins. x is zero-padded (or truncated) to nfft.
std::vector<double> magnitude_spectrum(std::span<const double> x,
                                       std::size_t nfft);

// |rfft(x, nfft)|^2.
std::vector<double> power_spectrum(std::span<const double> x,
                                   std::size_t nfft);

// Max relative deviation | |B|-|A| | / |A| over bins where
// |A| >= guard_rel * max|A| ("in band" of the reference a).
double magnitude_deviation(const std::vector<double>& a,
                           const std::vector<double>& b,
                           double guard_rel = 1e-2);

// Deviation of the magnitude spectra of two tap sets on a common FFT grid.
double kernel_spectral_deviation(std::span<const double> a,
                                 std::span<const double> b,
                                 double guard_rel = 1e-2);

}  // namespace pulselink::spectral
