#include "pulselink/link.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "pulselink/channel.hpp"
#include "pulselink/errors.hpp"
#include "pulselink/hash.hpp"
#include "pulselink/kernels.hpp"
#include "pulselink/metrics.hpp"
#include "pulselink/rng.hpp"
#include "pulselink/theory.hpp"

namespace pulselink {

const char* to_string(SyncMode mode) {
    switch (mode) {
        case SyncMode::ideal: return "ideal";
        case SyncMode::mpa: return "mpa";
        case SyncMode::mma: return "mma";
    }
    return "?";
}

SyncMode sync_mode_from_string(const std::string& name) {
    if (name == "ideal") return SyncMode::ideal;
    if (name == "mpa") return SyncMode::mpa;
    if (name == "mma") return SyncMode::mma;
    throw invalid_input("unknown sync mode: " + name);
}

void LinkConfig::check() const {
    if (n_s < 2) throw invalid_input("LinkConfig: n_s must be >= 2");
    if (n_p < 4 * static_cast<std::int64_t>(n_s))
        throw invalid_input("LinkConfig: require n_p >= 4*n_s (no-pileup detection regime)");
    if (!(beta > 0.0 && beta <= 1.0)) throw invalid_input("LinkConfig: beta in (0,1]");
    if (half_len_symbols < 1) throw invalid_input("LinkConfig: half_len_symbols >= 1");
    if (k_sections > 0 && !(pole_radius > 0.0 && pole_radius < 1.0))
        throw invalid_input("LinkConfig: pole_radius in (0,1)");
    if (!(eta > 0.0 && eta <= 1e-2)) throw invalid_input("LinkConfig: eta in (0, 1e-2]");
    if (!(m > 1.0)) throw invalid_input("LinkConfig: m must be > 1");
    if (n_bits < 1) throw invalid_input("LinkConfig: n_bits >= 1");
    if (true_offset < 0) throw invalid_input("LinkConfig: true_offset >= 0");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw invalid_input("LinkConfig: amplitude must be positive");
}

std::string canonical_string(const LinkConfig& c) {
    char buf[512];
    std::snprintf(
        buf, sizeof(buf),
        "amplitude=%.17g;beta=%.17g;eta=%.17g;half_len_symbols=%d;"
        "k_sections=%zu;m=%.17g;master_seed=%llu;mma_extra_point=%d;"
        "n_bits=%llu;n_p=%lld;n_s=%d;pole_radius=%.17g;snr_db=%.17g;"
        "sync_mode=%s;true_offset=%lld",
        c.amplitude, c.beta, c.eta, c.half_len_symbols, c.k_sections, c.m,
        static_cast<unsigned long long>(c.master_seed),
        c.mma_extra_point ? 1 : 0,
        static_cast<unsigned long long>(c.n_bits),
        static_cast<long long>(c.n_p), c.n_s, c.pole_radius, c.snr_db,
        to_string(c.sync_mode), static_cast<long long>(c.true_offset));
    return buf;
}

std::uint64_t config_hash(const LinkConfig& config) {
    return fnv1a64(canonical_string(config));
}

SyncState make_sync_state(std::int64_t n_p, SyncState::Mode mode, double m) {
    if (n_p < 1) throw invalid_input("SyncState: n_p must be >= 1");
    if (!(m > 1.0)) throw invalid_input("SyncState: m must be > 1");
    SyncState state;
    state.bins.assign(static_cast<std::size_t>(n_p), 0.0);
    state.mode = mode;
    state.m = m;
    return state;
}

namespace {

inline std::int64_t mod_np(std::int64_t k, std::int64_t n_p) {
    const std::int64_t r = k % n_p;
    return r < 0 ? r + n_p : r;
}

void decay_bins(SyncState& state) {
    const double keep = (state.m - 1.0) / state.m;
    for (double& b : state.bins) b *= keep;
}

}  // namespace

void mpa_update(SyncState& state, std::span<const double> window,
                std::int64_t end_index) {
    const std::int64_t n_p = static_cast<std::int64_t>(state.bins.size());
    if (state.mode != SyncState::Mode::power)
        throw contract_error("mpa_update: state mode is not power");
    if (window.size() != static_cast<std::size_t>(n_p) + 1)
        throw contract_error("mpa_update: window must hold n_p+1 samples");
    decay_bins(state);
    const double w = 1.0 / state.m;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const std::int64_t k = end_index - n_p + static_cast<std::int64_t>(i);
        state.bins[mod_np(k, n_p)] += w * window[i] * window[i];
    }
    ++state.pulses_seen;
}

void mma_update(SyncState& state, std::span<const double> window,
                std::int64_t end_index) {
    const std::int64_t n_p = static_cast<std::int64_t>(state.bins.size());
    if (state.mode != SyncState::Mode::magnitude)
        throw contract_error("mma_update: state mode is not magnitude");
    if (window.size() != static_cast<std::size_t>(n_p))
        throw contract_error("mma_update: window must hold n_p samples");
    decay_bins(state);
    const double w = 1.0 / state.m;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const std::int64_t k = end_index - n_p + 1 + static_cast<std::int64_t>(i);
        state.bins[mod_np(k, n_p)] += w * std::fabs(window[i]);
    }
    ++state.pulses_seen;
}

void mma_update_with_extra_point(SyncState& state,
                                 std::span<const double> window,
                                 std::int64_t end_index) {
    const std::int64_t n_p = static_cast<std::int64_t>(state.bins.size());
    if (state.mode != SyncState::Mode::magnitude)
        throw contract_error("mma_update_with_extra_point: state mode is not magnitude");
    if (window.size() != static_cast<std::size_t>(n_p) + 1)
        throw contract_error("mma_update_with_extra_point: window must hold n_p+1 samples");
    decay_bins(state);
    const double w = 1.0 / state.m;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const std::int64_t k = end_index - n_p + static_cast<std::int64_t>(i);
        state.bins[mod_np(k, n_p)] += w * std::fabs(window[i]);
    }
    ++state.pulses_seen;
}

std::int64_t sync_estimate(const SyncState& state) {
    if (state.bins.empty()) throw contract_error("sync_estimate: empty state");
    const auto it = std::max_element(state.bins.begin(), state.bins.end());
    return static_cast<std::int64_t>(it - state.bins.begin());
}

std::vector<int> detect_bits(const Waveform& y,
                             std::span<const std::int64_t> indices) {
    std::vector<int> bits(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::int64_t k = indices[j];
        if (k < 0 || k >= static_cast<std::int64_t>(y.samples.size()))
            throw contract_error("detect_bits: sampling index out of range");
        bits[j] = y.samples[static_cast<std::size_t>(k)] >= 0.0 ? 1 : 0;
    }
    return bits;
}

namespace {

// Streaming FIR over fixed-size blocks; hist carries the last taps-1 inputs.
struct StreamingFir {
    std::vector<double> taps;
    std::vector<double> hist;
    std::vector<double> scratch;

    explicit StreamingFir(std::vector<double> t)
        : taps(std::move(t)), hist(taps.size() - 1, 0.0) {}

    void process(const double* in, double* out, std::size_t n) {
        const std::size_t L = taps.size();
        scratch.resize(hist.size() + n);
        std::copy(hist.begin(), hist.end(), scratch.begin());
        std::copy(in, in + n, scratch.begin() + hist.size());
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* base = scratch.data() + i;  // ends at i + L - 1
            for (std::size_t t = 0; t < L; ++t) acc += taps[t] * base[L - 1 - t];
            out[i] = acc;
        }
        std::copy(scratch.end() - static_cast<std::ptrdiff_t>(hist.size()),
                  scratch.end(), hist.begin());
    }
};

struct EngineResult {
    std::uint64_t counted = 0;
    std::uint64_t errors = 0;
    std::uint64_t sync_failures = 0;
    std::int64_t final_i_max = 0;
};

// Block-streaming transmitter/channel/receiver with the sync recursion.
// Stream coordinates carry one pulse period of noise-only pre-roll so the
// first sync window is fully defined; pre-roll length n_p keeps stream and
// link phases congruent mod n_p. Sync updates, warm-up, and bit counting are
// anchored at the first period in which the restored train has propagated
// through the spreading group delay.
EngineResult stream_run(
    const LinkPlan& plan, double sigma_n, std::uint64_t n_bits,
    std::uint64_t warmup,
    const std::function<void(std::uint64_t, const SyncState&, std::int64_t)>&
        on_update = nullptr) {
    const LinkConfig& cfg = plan.config;
    const std::int64_t n_p = cfg.n_p;
    const std::vector<double>& g = plan.pair.spreading.taps;
    const std::int64_t lg = static_cast<std::int64_t>(g.size());
    const std::int64_t off = cfg.true_offset;
    const std::int64_t delay = plan.total_delay;
    const std::int64_t true_phase = mod_np(off + delay, n_p);
    const std::uint64_t j_start =
        1 + static_cast<std::uint64_t>((off + delay) / n_p);
    const std::uint64_t count_from = j_start + warmup;
    const std::uint64_t n_periods = count_from + n_bits + 3;

    // Transmit ring: cells for stream samples [emitted, emitted + ring_len).
    std::size_t ring_len = 1;
    while (ring_len < static_cast<std::size_t>(lg + 2 * n_p)) ring_len <<= 1;
    std::vector<double> tx_ring(ring_len, 0.0);
    const std::size_t ring_mask = ring_len - 1;

    // Receive history: enough for one sync window plus the current period.
    std::size_t y_len = 1;
    while (y_len < static_cast<std::size_t>(4 * n_p + 2)) y_len <<= 1;
    std::vector<double> y_ring(y_len, 0.0);
    const std::size_t y_mask = y_len - 1;

    ChainFilter chain(plan.pair.chain);
    StreamingFir fir(time_reverse(plan.pair.seed).taps);
    std::vector<double> block(static_cast<std::size_t>(n_p));
    std::vector<double> yblock(static_cast<std::size_t>(n_p));
    std::vector<double> window(static_cast<std::size_t>(n_p) + 1);

    const bool syncing = cfg.sync_mode != SyncMode::ideal;
    SyncState state = make_sync_state(
        n_p,
        cfg.sync_mode == SyncMode::mpa ? SyncState::Mode::power
                                       : SyncState::Mode::magnitude,
        cfg.m);

    std::uint64_t next_pulse = 0;
    std::uint64_t blocks_emitted = 0;

    auto emit_block = [&](std::uint64_t b) {
        const std::int64_t s0 = static_cast<std::int64_t>(b) * n_p;
        const std::int64_t s1 = s0 + n_p;
        // Render every pulse that starts before this block ends.
        while (next_pulse < n_periods) {
            const std::int64_t t = n_p + off + static_cast<std::int64_t>(next_pulse) * n_p;
            if (t >= s1) break;
            const double a = rng::bit(plan.bits_seed, next_pulse) ? cfg.amplitude
                                                                  : -cfg.amplitude;
            for (std::int64_t i = 0; i < lg; ++i)
                tx_ring[static_cast<std::size_t>(t + i) & ring_mask] +=
                    a * g[static_cast<std::size_t>(i)];
            ++next_pulse;
        }
        for (std::int64_t s = s0; s < s1; ++s) {
            const std::size_t cell = static_cast<std::size_t>(s) & ring_mask;
            block[static_cast<std::size_t>(s - s0)] = tx_ring[cell];
            tx_ring[cell] = 0.0;
        }
        if (sigma_n > 0.0)
            kernels::gaussian_add(plan.noise_seed,
                                  static_cast<std::uint64_t>(s0), sigma_n,
                                  block.data(), block.size());
        chain.process(block, block);
        fir.process(block.data(), yblock.data(), block.size());
        for (std::int64_t s = s0; s < s1; ++s)
            y_ring[static_cast<std::size_t>(s) & y_mask] =
                yblock[static_cast<std::size_t>(s - s0)];
        ++blocks_emitted;
    };

    EngineResult res;
    std::int64_t i_max = syncing ? 0 : true_phase;
    for (std::uint64_t j = 0; j < n_periods; ++j) {
        while (blocks_emitted < j + 2) emit_block(blocks_emitted);
        if (syncing && j >= j_start) {
            // Window anchored at the previous sampling instant k_{j-1}.
            const std::int64_t end_link =
                i_max + static_cast<std::int64_t>(j - 1) * n_p;
            const std::int64_t end_stream = end_link + n_p;
            const bool wide = cfg.sync_mode == SyncMode::mpa ||
                              (cfg.sync_mode == SyncMode::mma && cfg.mma_extra_point);
            const std::size_t wlen = static_cast<std::size_t>(n_p) + (wide ? 1 : 0);
            for (std::size_t i = 0; i < wlen; ++i) {
                const std::int64_t s =
                    end_stream - static_cast<std::int64_t>(wlen) + 1 +
                    static_cast<std::int64_t>(i);
                window[i] = y_ring[static_cast<std::size_t>(s) & y_mask];
            }
            auto win = std::span<const double>(window.data(), wlen);
            if (cfg.sync_mode == SyncMode::mpa)
                mpa_update(state, win, end_link);
            else if (cfg.mma_extra_point)
                mma_update_with_extra_point(state, win, end_link);
            else
                mma_update(state, win, end_link);
            const std::int64_t est = sync_estimate(state);
            if (est != i_max && j >= count_from) ++res.sync_failures;
            i_max = est;
            if (on_update) on_update(j - j_start + 1, state, i_max);
        }
        const std::int64_t k_link = next_sample_index(i_max, static_cast<std::int64_t>(j), n_p);
        const double y_k = y_ring[static_cast<std::size_t>(k_link + n_p) & y_mask];
        const int bit = y_k >= 0.0 ? 1 : 0;
        if (j >= count_from && res.counted < n_bits) {
            const std::int64_t ref = static_cast<std::int64_t>(
                std::llround(static_cast<double>(k_link - off - delay) /
                             static_cast<double>(n_p)));
            if (ref >= 0 && ref < static_cast<std::int64_t>(n_periods)) {
                ++res.counted;
                const int sent = rng::bit(plan.bits_seed,
                                          static_cast<std::uint64_t>(ref));
                if (bit != sent) ++res.errors;
            }
        }
    }
    res.final_i_max = i_max;
    return res;
}

double measure_noise_power(const LinkPlan& plan, double sigma_n) {
    const std::size_t comp_len =
        plan.pair.spreading.taps.size() + plan.pair.seed.taps.size() - 1;
    const std::size_t n = std::max<std::size_t>(1u << 20, 8 * comp_len);
    std::vector<double> noise(n, 0.0);
    const std::uint64_t seed = rng::derive(plan.noise_seed, 0x5112);
    kernels::gaussian_add(seed, 0, sigma_n, noise.data(), n);
    ChainFilter chain(plan.pair.chain);
    chain.process(noise, noise);
    std::vector<double> y(n);
    StreamingFir fir(time_reverse(plan.pair.seed).taps);
    fir.process(noise.data(), y.data(), n);
    const auto support = train_support(n, comp_len);
    const auto pw = kernels::power(y.data() + support.start,
                                   static_cast<std::size_t>(support.length()));
    return pw.sum_sq / static_cast<double>(support.length());
}

}  // namespace

LinkPlan make_link_plan(const LinkConfig& config) {
    config.check();
    LinkPlan plan;
    plan.config = config;
    const FirKernel seed = rrc_kernel(config.beta, config.n_s, config.half_len_symbols);
    const AllpassChain chain = make_allpass_chain(config.k_sections, config.pole_radius);
    plan.pair = build_spreading_kernel(seed, chain, config.eta);
    plan.total_delay = plan.pair.total_delay();
    plan.hash = config_hash(config);
    plan.bits_seed = rng::derive(config.master_seed ^ plan.hash, 0xB175);
    plan.noise_seed = rng::derive(config.master_seed ^ plan.hash, 0x015E);
    plan.cal_seed = rng::derive(config.master_seed ^ plan.hash, 0xCA1B);

    // White-noise power gain of the receive chain (allpass + matched FIR).
    const FirKernel chain_ir =
        apply_chain(FirKernel::from_taps({1.0}), chain, 1e-8);
    const FirKernel matched = time_reverse(seed);
    std::vector<double> comp(chain_ir.taps.size() + matched.taps.size() - 1);
    kernels::convolve(chain_ir.taps.data(), chain_ir.taps.size(),
                      matched.taps.data(), matched.taps.size(), comp.data());
    double gain = 0.0;
    for (double v : comp) gain += v * v;
    plan.noise_gain = gain;

    // Noiseless transmit+receive pass over a seeded calibration pattern.
    const std::size_t n_cal = 1024;
    std::vector<int> bits(n_cal);
    for (std::size_t i = 0; i < n_cal; ++i)
        bits[i] = rng::bit(plan.cal_seed, i);
    const PulseTrain train = delta_train_from_bits(
        bits, config.n_p, config.true_offset, config.amplitude);
    const Waveform tx = render_train(train, plan.pair.spreading);
    const MatchedOutput mf = matched_receive(tx, plan.pair);
    const std::size_t comp_len =
        plan.pair.spreading.taps.size() + seed.taps.size() - 1;
    const SupportInterval support = train_support(mf.y.samples.size(), comp_len);
    const auto pw = kernels::power(mf.y.samples.data() + support.start,
                                   static_cast<std::size_t>(support.length()));
    plan.signal_power = pw.sum_sq / static_cast<double>(support.length());
    plan.peak_power = pw.max_sq;
    if (!(plan.signal_power > 0.0))
        throw calibration_error("make_link_plan: zero signal power");
    plan.papr_measured = plan.peak_power / plan.signal_power;
    return plan;
}

TransmitResult transmit(const std::vector<int>& bits, const LinkPlan& plan) {
    const PulseTrain train =
        delta_train_from_bits(bits, plan.config.n_p, plan.config.true_offset,
                              plan.config.amplitude);
    TransmitResult out;
    out.x = render_train(train, plan.pair.spreading);
    out.delay_to_peak = plan.total_delay;
    return out;
}

BerRecord run_link(const LinkConfig& config) {
    const LinkPlan plan = make_link_plan(config);
    const NoiseSpec noise = calibrate_sigma(plan, config.snr_db, plan.noise_seed);

    const std::uint64_t warmup =
        config.sync_mode == SyncMode::ideal
            ? 0
            : static_cast<std::uint64_t>(std::ceil(8.0 * config.m));
    const EngineResult res =
        stream_run(plan, noise.sigma_n, config.n_bits, warmup);

    BerRecord rec;
    rec.n_p = config.n_p;
    rec.n_s = config.n_s;
    rec.sync_mode = config.sync_mode;
    rec.m = config.m;
    rec.snr_target_db = config.snr_db;
    const double noise_power = measure_noise_power(plan, noise.sigma_n);
    rec.snr_measured_db =
        noise_power > 0.0
            ? 10.0 * std::log10(plan.signal_power / noise_power)
            : std::numeric_limits<double>::infinity();
    rec.n_bits = res.counted;
    rec.bit_errors = res.errors;
    rec.ber = res.counted ? static_cast<double>(res.errors) /
                                static_cast<double>(res.counted)
                          : 0.0;
    rec.ber_predicted =
        noise.sigma_n > 0.0
            ? theory::ber_for_amplitude(
                  std::sqrt(plan.peak_power),
                  noise.sigma_n * std::sqrt(plan.noise_gain))
            : 0.0;
    rec.sync_failures = res.sync_failures;
    rec.final_i_max = res.final_i_max;
    rec.true_phase = mod_np(config.true_offset + plan.total_delay, config.n_p);
    rec.config_hash = plan.hash;
    rec.master_seed = config.master_seed;
    return rec;
}

std::vector<SyncDemoRow> run_sync_demo(const LinkConfig& config,
                                       std::uint64_t updates) {
    if (config.sync_mode == SyncMode::ideal)
        throw invalid_input("run_sync_demo: pick mpa or mma sync");
    const LinkPlan plan = make_link_plan(config);
    const NoiseSpec noise = calibrate_sigma(plan, config.snr_db, plan.noise_seed);
    const std::int64_t true_phase =
        mod_np(config.true_offset + plan.total_delay, config.n_p);

    std::vector<SyncDemoRow> rows;
    rows.reserve(static_cast<std::size_t>(updates) *
                 static_cast<std::size_t>(config.n_p));
    auto capture = [&](std::uint64_t update, const SyncState& state,
                       std::int64_t i_max) {
        if (update > updates) return;
        for (std::size_t b = 0; b < state.bins.size(); ++b)
            rows.push_back(SyncDemoRow{update, static_cast<std::int64_t>(b),
                                       state.bins[b], i_max, true_phase});
    };
    stream_run(plan, noise.sigma_n, updates, 0, capture);
    return rows;
}

}  // namespace pulselink
