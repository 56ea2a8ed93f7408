#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pulselink/kernels.hpp"
#include "pulselink/rng.hpp"

using namespace pulselink;

namespace {
std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(gen);
    return v;
}
}  // namespace

TEST_CASE("parallel convolve is bit-identical to serial") {
    for (auto [nx, nh] : {std::pair<std::size_t, std::size_t>{300, 17},
                          {1 << 15, 65},
                          {513, 512}}) {
        const auto x = random_vec(nx, 1 + nx);
        const auto h = random_vec(nh, 2 + nh);
        std::vector<double> a(nx + nh - 1), b(nx + nh - 1);
        kernels::convolve_serial(x.data(), nx, h.data(), nh, a.data());
        kernels::convolve_parallel(x.data(), nx, h.data(), nh, b.data());
        CHECK(a == b);
    }
}

TEST_CASE("parallel render is bit-identical to serial") {
    const std::size_t n_pulses = 700;
    const std::size_t nh = 129;
    std::vector<std::int64_t> arrivals(n_pulses);
    std::mt19937_64 gen(5);
    std::int64_t t = 0;
    for (auto& a : arrivals) {
        t += 1 + static_cast<std::int64_t>(gen() % 40);
        a = t;
    }
    const auto amps = random_vec(n_pulses, 6);
    const auto taps = random_vec(nh, 7);
    const std::size_t nout = static_cast<std::size_t>(t) + nh;
    std::vector<double> a(nout, 0.0), b(nout, 0.0);
    kernels::render_add_serial(arrivals.data(), amps.data(), n_pulses,
                               taps.data(), nh, a.data(), nout);
    kernels::render_add_parallel(arrivals.data(), amps.data(), n_pulses,
                                 taps.data(), nh, b.data(), nout);
    CHECK(a == b);
}

TEST_CASE("parallel gaussian stream is bit-identical to serial") {
    const std::size_t n = 100000;
    std::vector<double> a(n, 0.25), b(n, 0.25);
    kernels::gaussian_add_serial(42, 1000, 0.7, a.data(), n);
    kernels::gaussian_add_parallel(42, 1000, 0.7, b.data(), n);
    CHECK(a == b);
}

TEST_CASE("parallel reductions agree with serial") {
    const auto x = random_vec(1 << 18, 11);
    const auto ms = kernels::moments_serial(x.data(), x.size());
    const auto mp = kernels::moments_parallel(x.data(), x.size());
    CHECK(ms.mean == doctest::Approx(mp.mean).epsilon(1e-12));
    CHECK(ms.m2 == doctest::Approx(mp.m2).epsilon(1e-12));
    CHECK(ms.m3 == doctest::Approx(mp.m3).epsilon(1e-9));
    CHECK(ms.m4 == doctest::Approx(mp.m4).epsilon(1e-12));

    const auto ps = kernels::power_serial(x.data(), x.size());
    const auto pp = kernels::power_parallel(x.data(), x.size());
    CHECK(ps.max_sq == pp.max_sq);
    CHECK(ps.sum_sq == doctest::Approx(pp.sum_sq).epsilon(1e-12));

    const auto es = kernels::polarity_errors_serial(9, 0, 300000, 2.0, 1.0);
    const auto ep = kernels::polarity_errors_parallel(9, 0, 300000, 2.0, 1.0);
    CHECK(es == ep);
}

TEST_CASE("counter gaussian moments") {
    const std::size_t n = 1 << 20;
    std::vector<double> z(n, 0.0);
    kernels::gaussian_add(12345, 0, 1.0, z.data(), n);
    const auto m = kernels::moments(z.data(), n);
    CHECK(std::fabs(m.mean) < 4.0 / 1024.0);  // 4 sigma / sqrt(n)
    CHECK(m.m2 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m.m4 / (m.m2 * m.m2) - 3.0 == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("gaussian streams from different seeds are uncorrelated") {
    const std::size_t n = 1 << 20;
    std::vector<double> a(n, 0.0), b(n, 0.0);
    kernels::gaussian_add(111, 0, 1.0, a.data(), n);
    kernels::gaussian_add(222, 0, 1.0, b.data(), n);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    const double rho = dot / static_cast<double>(n);
    CHECK(std::fabs(rho) < 0.01);
}
