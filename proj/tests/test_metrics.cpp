#include <doctest.h>

#include <cmath>
#include <vector>

#include "pulselink/errors.hpp"
#include "pulselink/metrics.hpp"
#include "pulselink/rng.hpp"
#include "pulselink/shaping.hpp"
#include "pulselink/signal.hpp"

using namespace pulselink;

namespace {

PulseTrain regular_train(std::size_t n_pulses, std::int64_t n_p,
                         std::uint64_t seed) {
    PulseTrain t;
    t.arrivals.resize(n_pulses);
    t.amplitudes.resize(n_pulses);
    for (std::size_t j = 0; j < n_pulses; ++j) {
        t.arrivals[j] = static_cast<std::int64_t>(j) * n_p;
        t.amplitudes[j] = rng::bit(seed, j) ? 1.0 : -1.0;
    }
    t.total_len = t.arrivals.back() + 1;
    return t;
}

double rc_train_papr(std::int64_t n_p, std::size_t n_pulses,
                     std::uint64_t seed) {
    const auto rc = rc_kernel(0.5, 2, 8);
    const auto x = render_train(regular_train(n_pulses, n_p, seed), rc);
    return papr(x, train_support(x.samples.size(), rc.taps.size()));
}

}  // namespace

TEST_CASE("papr basics") {
    Waveform c;
    c.samples.assign(64, 0.7);
    CHECK(papr(c, SupportInterval::full(c)) == doctest::Approx(1.0).epsilon(1e-15));

    Waveform spike;
    spike.samples.assign(100, 0.0);
    spike.samples[31] = 1.0;
    CHECK(papr(spike, SupportInterval::full(spike)) == doctest::Approx(100.0).epsilon(1e-12));

    // scale invariance is exact
    Waveform a;
    a.samples = {0.2, -1.4, 0.9, 3.0, -0.3, 0.1, 2.2, -2.0};
    const double p0 = papr(a, SupportInterval::full(a));
    Waveform b = a;
    for (double& v : b.samples) v *= -7.25;
    CHECK(papr(b, SupportInterval::full(b)) == p0);
    CHECK(p0 >= 1.0);

    Waveform z;
    z.samples.assign(16, 0.0);
    CHECK_THROWS_AS((void)papr(z, SupportInterval::full(z)), undefined_papr);
    CHECK_THROWS_AS((void)papr(a, SupportInterval{3, 99}), invalid_input);
}

TEST_CASE("rc train papr approaches 1.143 n_p/n_s") {
    // single point from the figure caption: n_p=64, n_s=2 -> about 36.6
    CHECK(rc_train_papr(64, 3000, 12) == doctest::Approx(36.58).epsilon(0.05));

    // affine growth: slope of papr vs n_p/n_s within 2% of 1.143
    std::vector<double> xs, ys;
    for (std::int64_t n_p : {32, 64, 128, 256, 512}) {
        xs.push_back(static_cast<double>(n_p) / 2.0);
        ys.push_back(rc_train_papr(n_p, n_p >= 256 ? 400 : 1200, 99));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(1.143).epsilon(0.02));
}

TEST_CASE("tbp_ratio") {
    const auto w = rrc_kernel(0.5, 2, 8);
    const SupportInterval sup{0, 2047};
    CHECK(tbp_ratio(w, w, sup) == doctest::Approx(1.0).epsilon(1e-15));

    const auto pair = build_spreading_kernel(w, make_allpass_chain(32, 0.9), 1e-5);
    const double fwd = tbp_ratio(pair.spreading, w, sup);
    const double rev = tbp_ratio(w, pair.spreading, sup);
    CHECK(fwd > 10.0);
    CHECK(fwd * rev == doctest::Approx(1.0).epsilon(1e-12));

    // different spectral content is rejected
    const auto narrow = rrc_kernel(0.25, 2, 8);
    CHECK_THROWS_AS((void)tbp_ratio(narrow, w, sup), incomparable_kernels);
    CHECK_THROWS_AS((void)tbp_ratio(w, w, SupportInterval{0, 5}), invalid_input);
}

TEST_CASE("excess kurtosis") {
    Waveform g;
    g.samples.assign(1u << 20, 0.0);
    for (std::size_t i = 0; i < g.samples.size(); ++i)
        g.samples[i] = rng::gaussian(31337, i);
    CHECK(std::fabs(excess_kurtosis(g)) < 0.05);

    // sparse +-1 delta train, density 1/128 -> n_p - 3
    Waveform sparse;
    sparse.samples.assign(128 * 30000, 0.0);
    for (std::size_t j = 0; j < 30000; ++j)
        sparse.samples[128 * j] = rng::bit(5, j) ? 1.0 : -1.0;
    CHECK(excess_kurtosis(sparse) == doctest::Approx(125.0).epsilon(0.10));

    Waveform flat;
    flat.samples.assign(2000, 3.5);
    CHECK_THROWS_AS((void)excess_kurtosis(flat), invalid_input);

    Waveform tiny;
    tiny.samples.assign(10, 1.0);
    CHECK_THROWS_AS((void)excess_kurtosis(tiny), invalid_input);

    // distributional lower bound
    Waveform twopoint;
    twopoint.samples.assign(5000, 0.0);
    for (std::size_t i = 0; i < twopoint.samples.size(); ++i)
        twopoint.samples[i] = (i & 1) ? 1.0 : -1.0;
    CHECK(excess_kurtosis(twopoint) >= -2.0 - 1e-12);
    CHECK(excess_kurtosis(g) >= -2.0 - 1e-12);
}

TEST_CASE("measure_snr") {
    Waveform s, n;
    s.samples.assign(4096, 0.0);
    n.samples.assign(4096, 0.0);
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        s.samples[i] = rng::gaussian(1, i);
        n.samples[i] = rng::gaussian(2, i);
    }
    const auto sup = SupportInterval::full(s);
    const double equal_db = measure_snr_db(s, s, sup);
    CHECK(equal_db == doctest::Approx(0.0).epsilon(1e-12));

    Waveform n10 = n;
    for (double& v : n10.samples) v *= 10.0;
    CHECK(measure_snr_db(s, n, sup) - measure_snr_db(s, n10, sup) ==
          doctest::Approx(20.0).epsilon(1e-9));

    Waveform zero;
    zero.samples.assign(4096, 0.0);
    CHECK(std::isinf(measure_snr_db(s, zero, sup)));
}
