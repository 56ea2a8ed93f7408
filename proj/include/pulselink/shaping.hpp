#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pulselink/signal.hpp"

namespace pulselink {

// One real-coefficient second-order allpass section with complex pole pair
// at radius * exp(+-i*angle). Numerator is the reversed denominator, so the
// magnitude response is exactly 1 at all frequencies.
struct AllpassSection {
    double radius = 0.0;
    double angle = 0.0;  // in (0, pi)

    double a1() const { return -2.0 * radius * std::cos(angle); }
    double a2() const { return radius * radius; }
};

struct AllpassChain {
    std::vector<AllpassSection> sections;

    bool is_identity() const { return sections.empty(); }
    std::size_t size() const { return sections.size(); }
};

// K sections at common radius r with pole angles on a chirp profile,
// theta_k = pi*sqrt((k+1/2)/K): section density grows linearly with
// frequency, so group delay ramps across the band and an impulse spreads
// into a chirp. K = 0 is the identity chain.
//
// (Uniform angle spacing theta_k = pi*(k+1/2)/K is useless here: the pole
// set becomes the roots of z^(2K) = -r^(2K), the cascade telescopes to
// (r^(2K) + z^(-2K))/(1 + r^(2K) z^(-2K)), and the "spread" impulse is a
// single delayed spike.)
AllpassChain make_allpass_chain(std::size_t k_sections, double pole_radius);

// Streaming cascade state, direct form II transposed per section.
class ChainFilter {
  public:
    explicit ChainFilter(const AllpassChain& chain);
    // in and out may alias. Throws instability_error on non-finite output.
    void process(std::span<const double> in, std::span<double> out);
    void reset();

  private:
    struct Coef {
        double a1, a2;
    };
    std::vector<Coef> coef_;
    std::vector<std::array<double, 2>> state_;
};

// Runs the cascade over a waveform (same length; tail state discarded).
Waveform apply_chain(const Waveform& x, const AllpassChain& chain, double eta);

// Kernel version: the response is extended past the input until the trailing
// envelope (running max over env_window samples) falls below eta * peak,
// then truncated there. Energy is preserved to within the truncation loss.
FirKernel apply_chain(const FirKernel& kernel, const AllpassChain& chain,
                      double eta, std::size_t env_window = 16);

// Root-raised-cosine seed, symmetric, length 2*half_len_symbols*n_s + 1,
// normalized to unit energy. Singular points of the closed form are replaced
// by their analytic limits.
FirKernel rrc_kernel(double beta, int n_s, int half_len_symbols);

// Raised cosine, peak-normalized to 1, zeros at nonzero multiples of n_s.
FirKernel rc_kernel(double beta, int n_s, int half_len_symbols);

// Gaussian seed (alternative to RRC), bt = 3-dB bandwidth-symbol product.
FirKernel gaussian_kernel(double bt, int n_s, int half_len_symbols);

// Transmit/receive filter pair: seed w, spreading pulse g (time-inverted
// truncated chain response of w), and the chain that undoes the spreading.
struct ShapingPair {
    FirKernel seed;
    FirKernel spreading;
    AllpassChain chain;
    double eta = 0.0;
    double spectral_deviation = 0.0;  // measured in-band |G| vs |W| max rel dev

    // Delay from an arrival rendered with `spreading` to the restored RC
    // peak at the matched-receive output.
    std::int64_t total_delay() const;
};

ShapingPair build_spreading_kernel(const FirKernel& seed,
                                   const AllpassChain& chain, double eta);

struct MatchedOutput {
    Waveform y;
    std::int64_t group_delay = 0;  // arrival index -> RC peak index in y
};

// Applies the pair's chain and correlates with the seed. For a noiseless
// single pulse of amplitude a rendered with pair.spreading at arrival t, the
// output peaks at y[t + group_delay] with value a * seed.energy().
MatchedOutput matched_receive(const Waveform& x, const ShapingPair& pair);

}  // namespace pulselink
