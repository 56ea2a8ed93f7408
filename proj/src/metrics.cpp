#include "pulselink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulselink/errors.hpp"
#include "pulselink/kernels.hpp"
#include "pulselink/spectral.hpp"

namespace pulselink {

SupportInterval SupportInterval::full(const Waveform& x) {
    if (x.samples.empty()) throw invalid_input("SupportInterval: empty waveform");
    return {0, static_cast<std::int64_t>(x.samples.size()) - 1};
}

void SupportInterval::check(std::size_t waveform_len) const {
    if (start < 0 || end < start ||
        end >= static_cast<std::int64_t>(waveform_len))
        throw invalid_input("SupportInterval: out of range");
}

SupportInterval train_support(std::size_t waveform_len, std::size_t taps_len) {
    const std::int64_t n = static_cast<std::int64_t>(waveform_len);
    const std::int64_t cut = static_cast<std::int64_t>(taps_len);
    if (n - 2 * cut < 1)
        throw invalid_input("train_support: waveform too short for edge cut");
    return {cut, n - cut - 1};
}

double papr(const Waveform& x, const SupportInterval& support) {
    support.check(x.samples.size());
    const auto p = kernels::power(x.samples.data() + support.start,
                                  static_cast<std::size_t>(support.length()));
    if (p.sum_sq == 0.0) throw undefined_papr("papr: all-zero support");
    return p.max_sq / (p.sum_sq / static_cast<double>(support.length()));
}

double tbp_ratio(const FirKernel& g, const FirKernel& w,
                 const SupportInterval& support) {
    g.check();
    w.check();
    const std::size_t need = std::max(g.taps.size(), w.taps.size());
    if (static_cast<std::size_t>(support.length()) < need)
        throw invalid_input("tbp_ratio: support must cover both kernels");
    const double dev = spectral::kernel_spectral_deviation(w.taps, g.taps);
    if (dev > 0.01)
        throw incomparable_kernels("tbp_ratio: magnitude spectra differ beyond 1%");
    const auto pg = kernels::power(g.taps.data(), g.taps.size());
    const auto pw = kernels::power(w.taps.data(), w.taps.size());
    return pw.max_sq / pg.max_sq;
}

double excess_kurtosis(const Waveform& x) {
    if (x.samples.size() < 1000)
        throw invalid_input("excess_kurtosis: need at least 1000 samples");
    const auto m = kernels::moments(x.samples.data(), x.samples.size());
    if (!(m.m2 > 0.0))
        throw invalid_input("excess_kurtosis: degenerate variance");
    return m.m4 / (m.m2 * m.m2) - 3.0;
}

double measure_snr_db(const Waveform& signal_only, const Waveform& noise_only,
                      const SupportInterval& support) {
    if (signal_only.samples.size() != noise_only.samples.size())
        throw invalid_input("measure_snr_db: length mismatch");
    support.check(signal_only.samples.size());
    const std::size_t n = static_cast<std::size_t>(support.length());
    const auto ps = kernels::power(signal_only.samples.data() + support.start, n);
    const auto pn = kernels::power(noise_only.samples.data() + support.start, n);
    if (pn.sum_sq == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ps.sum_sq / pn.sum_sq);
}

}  // namespace pulselink
