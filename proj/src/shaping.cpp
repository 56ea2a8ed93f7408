#include "pulselink/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulselink/errors.hpp"
#include "pulselink/kernels.hpp"
#include "pulselink/spectral.hpp"

namespace pulselink {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1e-2))
        throw invalid_input("apply_chain: eta must lie in (0, 1e-2]");
}

double sinc(double t) {
    if (std::fabs(t) < 1e-12) return 1.0;
    return std::sin(kPi * t) / (kPi * t);
}

void check_kernel_params(double beta, int n_s, int half_len_symbols) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw invalid_input("pulse kernel: beta must lie in (0, 1]");
    if (n_s < 2) throw invalid_input("pulse kernel: n_s must be >= 2");
    if (half_len_symbols < 1)
        throw invalid_input("pulse kernel: half_len_symbols must be >= 1");
}

}  // namespace

AllpassChain make_allpass_chain(std::size_t k_sections, double pole_radius) {
    if (k_sections > 0) {
        if (pole_radius >= 1.0)
            throw stability_error("make_allpass_chain: pole radius must be < 1");
        if (!(pole_radius > 0.0))
            throw invalid_input("make_allpass_chain: pole radius must be > 0");
    }
    AllpassChain chain;
    chain.sections.reserve(k_sections);
    const double kd = static_cast<double>(k_sections);
    for (std::size_t k = 0; k < k_sections; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / kd;
        chain.sections.push_back({pole_radius, kPi * std::sqrt(u)});
    }
    return chain;
}

ChainFilter::ChainFilter(const AllpassChain& chain) {
    coef_.reserve(chain.sections.size());
    for (const auto& s : chain.sections) {
        if (s.radius >= 1.0)
            throw stability_error("ChainFilter: pole radius must be < 1");
        coef_.push_back({s.a1(), s.a2()});
    }
    state_.assign(coef_.size(), {0.0, 0.0});
}

void ChainFilter::reset() {
    state_.assign(coef_.size(), {0.0, 0.0});
}

void ChainFilter::process(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size())
        throw contract_error("ChainFilter::process: size mismatch");
    if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
    for (std::size_t s = 0; s < coef_.size(); ++s) {
        const double a1 = coef_[s].a1;
        const double a2 = coef_[s].a2;
        double s1 = state_[s][0];
        double s2 = state_[s][1];
        for (double& v : out) {
            const double x = v;
            const double y = a2 * x + s1;
            s1 = a1 * x - a1 * y + s2;
            s2 = x - a2 * y;
            v = y;
        }
        state_[s][0] = s1;
        state_[s][1] = s2;
    }
    if (!out.empty() && !std::isfinite(out.back()))
        throw instability_error("ChainFilter: non-finite output");
}

Waveform apply_chain(const Waveform& x, const AllpassChain& chain, double eta) {
    check_eta(eta);
    if (x.samples.empty()) throw invalid_input("apply_chain: empty waveform");
    Waveform y = x;
    if (chain.is_identity()) return y;
    ChainFilter filt(chain);
    filt.process(y.samples, y.samples);
    for (double v : y.samples)
        if (!std::isfinite(v)) throw instability_error("apply_chain: non-finite output");
    return y;
}

FirKernel apply_chain(const FirKernel& kernel, const AllpassChain& chain,
                      double eta, std::size_t env_window) {
    check_eta(eta);
    kernel.check();
    if (chain.is_identity()) return kernel;
    if (env_window == 0) throw invalid_input("apply_chain: env_window must be >= 1");

    ChainFilter filt(chain);
    std::vector<double> y(kernel.taps.size());
    filt.process(kernel.taps, y);

    // Ring out with zero input until the trailing envelope decays.
    const std::size_t block = 256;
    const std::size_t cap =
        kernel.taps.size() + 4096 + 2048 * (chain.size() + 1);
    std::vector<double> zeros(block, 0.0);
    std::vector<double> ring(block);
    while (true) {
        double peak = 0.0;
        for (double v : y) peak = std::max(peak, std::fabs(v));
        const std::size_t tail = std::min(y.size(), env_window + block);
        double tail_max = 0.0;
        for (std::size_t i = y.size() - tail; i < y.size(); ++i)
            tail_max = std::max(tail_max, std::fabs(y[i]));
        if (y.size() > kernel.taps.size() && tail_max < eta * peak) break;
        if (y.size() > cap)
            throw instability_error("apply_chain: response failed to decay");
        filt.process(zeros, ring);
        y.insert(y.end(), ring.begin(), ring.end());
    }
    if (!std::isfinite(y.back()))
        throw instability_error("apply_chain: non-finite output");

    // Truncate right after the last sample at or above eta * peak.
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::fabs(v));
    std::size_t last = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (std::fabs(y[i]) >= eta * peak) last = i;
    y.resize(std::max<std::size_t>(last + 1, kernel.taps.size()));

    FirKernel out = FirKernel::from_taps(std::move(y));

    // Allpass sections preserve energy; anything beyond the truncation loss
    // indicates a filtering bug.
    const double e_in = kernel.energy();
    const double e_out = out.energy();
    const double tol = std::max(1e4 * eta * eta, 1e-12);
    if (std::fabs(e_out - e_in) > tol * e_in)
        throw instability_error("apply_chain: energy not preserved");
    return out;
}

FirKernel rrc_kernel(double beta, int n_s, int half_len_symbols) {
    check_kernel_params(beta, n_s, half_len_symbols);
    const std::size_t len = 2 * static_cast<std::size_t>(half_len_symbols) * n_s + 1;
    const std::size_t center = len / 2;
    std::vector<double> taps(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(center)) / n_s;
        double v;
        if (std::fabs(t) < 1e-12) {
            v = 1.0 + beta * (4.0 / kPi - 1.0);
        } else if (std::fabs(std::fabs(4.0 * beta * t) - 1.0) < 1e-9) {
            const double arg = kPi / (4.0 * beta);
            v = (beta / std::numbers::sqrt2) *
                ((1.0 + 2.0 / kPi) * std::sin(arg) +
                 (1.0 - 2.0 / kPi) * std::cos(arg));
        } else {
            const double bt = 4.0 * beta * t;
            v = (std::sin(kPi * t * (1.0 - beta)) +
                 bt * std::cos(kPi * t * (1.0 + beta))) /
                (kPi * t * (1.0 - bt * bt));
        }
        taps[k] = v;
    }
    double energy = 0.0;
    for (double v : taps) energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps) v *= scale;
    FirKernel out;
    out.taps = std::move(taps);
    out.peak_index = center;
    return out;
}

FirKernel rc_kernel(double beta, int n_s, int half_len_symbols) {
    check_kernel_params(beta, n_s, half_len_symbols);
    const std::size_t len = 2 * static_cast<std::size_t>(half_len_symbols) * n_s + 1;
    const std::size_t center = len / 2;
    std::vector<double> taps(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(center)) / n_s;
        double v;
        if (std::fabs(t) < 1e-12) {
            v = 1.0;
        } else if (std::fabs(std::fabs(2.0 * beta * t) - 1.0) < 1e-9) {
            v = (kPi / 4.0) * sinc(1.0 / (2.0 * beta));
        } else {
            const double bt = 2.0 * beta * t;
            v = sinc(t) * std::cos(kPi * beta * t) / (1.0 - bt * bt);
        }
        taps[k] = v;
    }
    FirKernel out;
    out.taps = std::move(taps);
    out.peak_index = center;
    return out;
}

FirKernel gaussian_kernel(double bt, int n_s, int half_len_symbols) {
    if (!(bt > 0.0 && bt <= 2.0))
        throw invalid_input("gaussian_kernel: bt must lie in (0, 2]");
    if (n_s < 2 || half_len_symbols < 1)
        throw invalid_input("gaussian_kernel: invalid n_s or half_len_symbols");
    const std::size_t len = 2 * static_cast<std::size_t>(half_len_symbols) * n_s + 1;
    const std::size_t center = len / 2;
    const double sigma = std::sqrt(std::numbers::ln2) / (2.0 * kPi * bt);
    std::vector<double> taps(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(center)) / n_s;
        taps[k] = std::exp(-0.5 * t * t / (sigma * sigma));
    }
    double energy = 0.0;
    for (double v : taps) energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps) v *= scale;
    FirKernel out;
    out.taps = std::move(taps);
    out.peak_index = center;
    return out;
}

std::int64_t ShapingPair::total_delay() const {
    return static_cast<std::int64_t>(spreading.taps.size()) - 1 +
           static_cast<std::int64_t>(seed.taps.size()) - 1 -
           2 * static_cast<std::int64_t>(seed.peak_index);
}

ShapingPair build_spreading_kernel(const FirKernel& seed,
                                   const AllpassChain& chain, double eta) {
    check_eta(eta);
    seed.check();
    ShapingPair pair;
    pair.seed = seed;
    pair.chain = chain;
    pair.eta = eta;
    pair.spreading = time_reverse(apply_chain(seed, chain, eta));
    pair.spectral_deviation =
        spectral::kernel_spectral_deviation(seed.taps, pair.spreading.taps);
    const double tol = std::max(100.0 * eta, 1e-3);
    if (pair.spectral_deviation > tol)
        throw instability_error(
            "build_spreading_kernel: seed/spreading spectra diverge");
    return pair;
}

MatchedOutput matched_receive(const Waveform& x, const ShapingPair& pair) {
    if (x.samples.empty()) throw invalid_input("matched_receive: empty input");
    // Pad so the last pulse's chain ring-out and correlation tail fit.
    const std::size_t pad = pair.spreading.taps.size() + pair.seed.taps.size();
    Waveform padded;
    padded.sample_rate = x.sample_rate;
    padded.samples.reserve(x.samples.size() + pad);
    padded.samples = x.samples;
    padded.samples.resize(x.samples.size() + pad, 0.0);
    Waveform despread = apply_chain(padded, pair.chain, pair.eta);
    MatchedOutput out;
    out.y = convolve_full(despread, time_reverse(pair.seed));
    out.group_delay = pair.total_delay();
    return out;
}

}  // namespace pulselink
