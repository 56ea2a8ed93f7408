#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pulselink/shaping.hpp"
#include "pulselink/signal.hpp"

namespace pulselink {

enum class SyncMode { ideal, mpa, mma };

const char* to_string(SyncMode mode);
SyncMode sync_mode_from_string(const std::string& name);

// Full experiment parameterization. Hashable via config_hash(); the
// canonical form is the sorted key=value string (see canonical_string).
struct LinkConfig {
    int n_s = 2;                    // samples per symbol period
    std::int64_t n_p = 32;          // samples between adjacent pulses
    double beta = 0.5;              // seed roll-off
    int half_len_symbols = 8;       // seed half length, symbols
    std::size_t k_sections = 16;    // allpass chain length
    double pole_radius = 0.9;
    double eta = 1e-5;              // spreading truncation threshold
    double m = 8.0;                 // averaging constant, > 1
    double snr_db = 0.0;            // target SNR at matched-filter output
    std::uint64_t n_bits = 10000;
    std::uint64_t master_seed = 1;
    SyncMode sync_mode = SyncMode::ideal;
    std::int64_t true_offset = 0;   // transmit start offset, samples
    double amplitude = 1.0;
    bool mma_extra_point = false;   // degraded MMA window variant (diagnostics)

    void check() const;
};

std::string canonical_string(const LinkConfig& config);
std::uint64_t config_hash(const LinkConfig& config);

// Modulo-averaged bins over pulse phase, updated once per pulse period.
struct SyncState {
    enum class Mode { power, magnitude };

    std::vector<double> bins;  // one per phase i = 0..n_p-1
    Mode mode = Mode::power;
    double m = 2.0;
    std::uint64_t pulses_seen = 0;
};

SyncState make_sync_state(std::int64_t n_p, SyncState::Mode mode, double m);

// Power update: window holds the n_p+1 receive samples k in
// [end_index - n_p, end_index]; bin mod(k, n_p) accumulates x^2[k]/m on top
// of the (m-1)/m decay. Both window endpoints share a phase, so that bin
// receives two contributions.
void mpa_update(SyncState& state, std::span<const double> window,
                std::int64_t end_index);

// Magnitude update over the half-open window (end_index - n_p, end_index],
// exactly n_p samples: each bin is touched once per update.
void mma_update(SyncState& state, std::span<const double> window,
                std::int64_t end_index);

// Deliberately includes the extra (n_p+1)-th sample in the magnitude sum;
// kept for the synchronization-failure comparison.
void mma_update_with_extra_point(SyncState& state,
                                 std::span<const double> window,
                                 std::int64_t end_index);

// argmax over bins, smallest index on ties.
std::int64_t sync_estimate(const SyncState& state);

inline std::int64_t next_sample_index(std::int64_t i_max, std::int64_t j,
                                      std::int64_t n_p) {
    return i_max + j * n_p;
}

// bit j = 1 if y[k_j] >= 0 else 0.
std::vector<int> detect_bits(const Waveform& y,
                             std::span<const std::int64_t> indices);

// Precomputed link invariants: shaping pair, delays, and the noiseless
// calibration measurements used for noise scaling and BER prediction.
struct LinkPlan {
    LinkConfig config;
    ShapingPair pair;
    std::int64_t total_delay = 0;   // arrival -> matched-output RC peak
    double signal_power = 0.0;      // mean square at matched output (noiseless)
    double peak_power = 0.0;        // max square over the same support
    double papr_measured = 0.0;     // peak_power / signal_power
    double noise_gain = 0.0;        // receive-chain white noise power gain
    std::uint64_t bits_seed = 0;
    std::uint64_t noise_seed = 0;
    std::uint64_t cal_seed = 0;
    std::uint64_t hash = 0;
};

LinkPlan make_link_plan(const LinkConfig& config);

struct TransmitResult {
    Waveform x;
    std::int64_t delay_to_peak = 0;  // add to an arrival index to land on
                                     // its restored peak after matched_receive
};

TransmitResult transmit(const std::vector<int>& bits, const LinkPlan& plan);

struct BerRecord {
    std::int64_t n_p = 0;
    int n_s = 0;
    SyncMode sync_mode = SyncMode::ideal;
    double m = 0.0;
    double snr_target_db = 0.0;
    double snr_measured_db = 0.0;
    std::uint64_t n_bits = 0;  // bits actually counted (post warm-up)
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ber_predicted = 0.0;
    std::uint64_t sync_failures = 0;
    std::int64_t final_i_max = 0;
    std::int64_t true_phase = 0;
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
};

// Seeded bits -> transmit -> calibrated AWGN -> matched receive -> sync ->
// detect -> count. Runs as a block-streaming pipeline; memory stays O(n_p +
// kernel lengths) regardless of n_bits. In mpa/mma modes, the first
// ceil(8*m) pulse periods are warm-up and excluded from counting.
BerRecord run_link(const LinkConfig& config);

struct SyncDemoRow {
    std::uint64_t update = 0;
    std::int64_t bin = 0;
    double value = 0.0;
    std::int64_t i_max = 0;
    std::int64_t true_phase = 0;
};

// Runs the sync recursion for `updates` pulse periods and records every bin
// after each update.
std::vector<SyncDemoRow> run_sync_demo(const LinkConfig& config,
                                       std::uint64_t updates);

}  // namespace pulselink
