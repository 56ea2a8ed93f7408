#include "pulselink/signal.hpp"

#include <algorithm>
#include <cmath>

#include "pulselink/errors.hpp"
#include "pulselink/kernels.hpp"

namespace pulselink {

void Waveform::check() const {
    if (samples.empty()) throw invalid_input("Waveform: length must be >= 1");
    if (!(sample_rate > 0.0)) throw invalid_input("Waveform: sample_rate must be > 0");
    for (double v : samples)
        if (!std::isfinite(v)) throw invalid_input("Waveform: non-finite sample");
}

void PulseTrain::check() const {
    if (arrivals.size() != amplitudes.size())
        throw invalid_input("PulseTrain: arrivals/amplitudes size mismatch");
    if (arrivals.empty()) throw invalid_input("PulseTrain: empty train");
    std::int64_t prev = -1;
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        if (arrivals[k] <= prev)
            throw invalid_input("PulseTrain: arrivals must be strictly increasing and >= 0");
        if (arrivals[k] >= total_len)
            throw invalid_input("PulseTrain: arrival beyond total_len");
        if (!std::isfinite(amplitudes[k]) || amplitudes[k] == 0.0)
            throw invalid_input("PulseTrain: amplitudes must be finite and nonzero");
        prev = arrivals[k];
    }
}

FirKernel FirKernel::from_taps(std::vector<double> taps) {
    FirKernel k;
    k.taps = std::move(taps);
    double best = -1.0;
    for (std::size_t i = 0; i < k.taps.size(); ++i) {
        const double mag = std::fabs(k.taps[i]);
        if (mag > best) {
            best = mag;
            k.peak_index = i;
        }
    }
    k.check();
    return k;
}

void FirKernel::check() const {
    if (taps.empty()) throw invalid_input("FirKernel: length must be >= 1");
    if (peak_index >= taps.size()) throw invalid_input("FirKernel: peak_index out of range");
    bool any = false;
    for (double v : taps) {
        if (!std::isfinite(v)) throw invalid_input("FirKernel: non-finite tap");
        if (v != 0.0) any = true;
    }
    if (!any) throw invalid_input("FirKernel: all taps zero");
}

double FirKernel::energy() const {
    double e = 0.0;
    for (double v : taps) e += v * v;
    return e;
}

PulseTrain delta_train_from_bits(const std::vector<int>& bits, std::int64_t n_p,
                                 std::int64_t offset, double amplitude) {
    if (bits.empty()) throw invalid_input("delta_train_from_bits: empty bit sequence");
    if (n_p < 1) throw invalid_input("delta_train_from_bits: n_p must be >= 1");
    if (offset < 0) throw invalid_input("delta_train_from_bits: offset must be >= 0");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw invalid_input("delta_train_from_bits: amplitude must be positive");
    PulseTrain train;
    train.arrivals.resize(bits.size());
    train.amplitudes.resize(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] != 0 && bits[j] != 1)
            throw invalid_input("delta_train_from_bits: bits must be 0 or 1");
        train.arrivals[j] = offset + static_cast<std::int64_t>(j) * n_p;
        train.amplitudes[j] = bits[j] ? amplitude : -amplitude;
    }
    train.total_len = offset + static_cast<std::int64_t>(bits.size() - 1) * n_p + 1;
    return train;
}

Waveform render_train(const PulseTrain& train, const FirKernel& kernel,
                      double sample_rate) {
    train.check();
    kernel.check();
    Waveform out;
    out.sample_rate = sample_rate;
    out.samples.assign(static_cast<std::size_t>(train.total_len) + kernel.taps.size() - 1, 0.0);
    kernels::render_add(train.arrivals.data(), train.amplitudes.data(),
                        train.arrivals.size(), kernel.taps.data(),
                        kernel.taps.size(), out.samples.data(),
                        out.samples.size());
    return out;
}

Waveform convolve_full(const Waveform& x, const FirKernel& kernel) {
    kernel.check();
    if (x.samples.empty()) throw invalid_input("convolve_full: empty input");
    Waveform out;
    out.sample_rate = x.sample_rate;
    out.samples.resize(x.samples.size() + kernel.taps.size() - 1);
    kernels::convolve(x.samples.data(), x.samples.size(), kernel.taps.data(),
                      kernel.taps.size(), out.samples.data());
    return out;
}

FirKernel time_reverse(const FirKernel& kernel) {
    kernel.check();
    FirKernel out;
    out.taps.assign(kernel.taps.rbegin(), kernel.taps.rend());
    out.peak_index = kernel.taps.size() - 1 - kernel.peak_index;
    return out;
}

}  // namespace pulselink
