#pragma once

#include <cstdint>
#include <vector>

namespace pulselink {

// Uniformly sampled real signal.
struct Waveform {
    std::vector<double> samples;
    double sample_rate = 1.0;  // F_s, samples/second

    void check() const;  // finite samples, length >= 1, rate > 0
};

// Ideal pulse train: integer arrival indices with signed amplitudes on a
// rendering canvas of total_len samples.
struct PulseTrain {
    std::vector<std::int64_t> arrivals;  // strictly increasing, < total_len
    std::vector<double> amplitudes;      // finite and nonzero, one per arrival
    std::int64_t total_len = 0;

    void check() const;
};

// Finite impulse response with its dominant tap recorded for delay
// bookkeeping.
struct FirKernel {
    std::vector<double> taps;
    std::size_t peak_index = 0;

    // Builds a kernel and locates the maximum-magnitude tap (smallest index
    // on ties).
    static FirKernel from_taps(std::vector<double> taps);
    void check() const;
    double energy() const;
};

// BPSK mapping of bits onto a regular train: arrival j = offset + j*n_p,
// amplitude +a for bit 1 and -a for bit 0.
PulseTrain delta_train_from_bits(const std::vector<int>& bits, std::int64_t n_p,
                                 std::int64_t offset, double amplitude);

// p[n] = sum_k a_k * taps[n - t_k]; output length total_len + taps - 1.
Waveform render_train(const PulseTrain& train, const FirKernel& kernel,
                      double sample_rate = 1.0);

// Full linear convolution, output length len(x) + len(taps) - 1.
Waveform convolve_full(const Waveform& x, const FirKernel& kernel);

// Taps reversed, peak index remapped. Involution.
FirKernel time_reverse(const FirKernel& kernel);

}  // namespace pulselink
