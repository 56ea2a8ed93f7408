#pragma once

#include <cstdint>

#include "pulselink/signal.hpp"

namespace pulselink {

// Inclusive sample range [start, end] over which a metric is evaluated.
struct SupportInterval {
    std::int64_t start = 0;
    std::int64_t end = 0;

    static SupportInterval full(const Waveform& x);
    std::int64_t length() const { return end - start + 1; }
    void check(std::size_t waveform_len) const;
};

// Support convention for rendered trains: the full waveform minus taps_len
// edge samples at each end, so startup/tail transients do not bias the mean.
SupportInterval train_support(std::size_t waveform_len, std::size_t taps_len);

// max(x^2) / mean(x^2) over the support. >= 1 always; scale invariant.
double papr(const Waveform& x, const SupportInterval& support);

// TBP ratio of two kernels with the same spectral content (checked to 1%):
// max(w^2)/max(g^2), the reciprocal of their PAPR ratio.
double tbp_ratio(const FirKernel& g, const FirKernel& w,
                 const SupportInterval& support);

// Sample fourth central moment / variance^2 - 3. Requires length >= 1000
// and nonzero variance.
double excess_kurtosis(const Waveform& x);

// 10*log10(mean(signal^2)/mean(noise^2)) over the support. Returns +inf
// when the noise power is zero.
double measure_snr_db(const Waveform& signal_only, const Waveform& noise_only,
                      const SupportInterval& support);

}  // namespace pulselink
