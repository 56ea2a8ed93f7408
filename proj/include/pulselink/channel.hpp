#pragma once

#include <cstdint>

#include "pulselink/signal.hpp"

namespace pulselink {

struct LinkPlan;

// Per-sample AWGN parameterization. The generator is a pure function of
// (seed, sample index); see rng::generator_id().
struct NoiseSpec {
    double sigma_n = 0.0;  // linear std deviation per sample
    std::uint64_t seed = 0;

    void check() const;
};

// output[n] = x[n] + sigma_n * g[n], g ~ iid N(0,1) from the seeded
// counter generator starting at first_index. Bit-identical for identical
// (x, spec, first_index).
Waveform add_awgn(const Waveform& x, const NoiseSpec& spec,
                  std::uint64_t first_index = 0);

// Chooses sigma_n so the matched-filter-output SNR equals target_snr_db:
// sigma_n = sqrt(S / (G * 10^(target/10))) with S the plan's noiseless
// signal power over the PAPR support and G the receive chain's white-noise
// power gain.
NoiseSpec calibrate_sigma(const LinkPlan& plan, double target_snr_db,
                          std::uint64_t noise_seed);

}  // namespace pulselink
