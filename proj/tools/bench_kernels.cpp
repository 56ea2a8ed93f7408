// Compares the serial reference kernels against their OpenMP versions.
// Build target: bench_kernels (not part of ctest).

#include <cstdio>
#include <random>
#include <vector>

#include "pulselink/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

namespace {

double now_s() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now_s();
        f();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(gen);
    return v;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-22s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                name, serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    using namespace pulselink;

    {
        const std::size_t nx = 1u << 20, nh = 257;
        const auto x = random_vec(nx, 1);
        const auto h = random_vec(nh, 2);
        std::vector<double> out(nx + nh - 1);
        const double ts = best_of(3, [&] {
            kernels::convolve_serial(x.data(), nx, h.data(), nh, out.data());
        });
        const double tp = best_of(3, [&] {
            kernels::convolve_parallel(x.data(), nx, h.data(), nh, out.data());
        });
        report("convolve 1M x 257", ts, tp);
    }
    {
        const std::size_t n_pulses = 100000, nh = 513;
        std::vector<std::int64_t> arrivals(n_pulses);
        for (std::size_t j = 0; j < n_pulses; ++j)
            arrivals[j] = static_cast<std::int64_t>(j) * 16;
        const auto amps = random_vec(n_pulses, 3);
        const auto taps = random_vec(nh, 4);
        std::vector<double> out(arrivals.back() + nh + 1);
        const double ts = best_of(3, [&] {
            std::fill(out.begin(), out.end(), 0.0);
            kernels::render_add_serial(arrivals.data(), amps.data(), n_pulses,
                                       taps.data(), nh, out.data(), out.size());
        });
        const double tp = best_of(3, [&] {
            std::fill(out.begin(), out.end(), 0.0);
            kernels::render_add_parallel(arrivals.data(), amps.data(), n_pulses,
                                         taps.data(), nh, out.data(), out.size());
        });
        report("render 100k x 513", ts, tp);
    }
    {
        const std::size_t n = 1u << 22;
        std::vector<double> buf(n, 0.0);
        const double ts = best_of(3, [&] {
            kernels::gaussian_add_serial(7, 0, 1.0, buf.data(), n);
        });
        const double tp = best_of(3, [&] {
            kernels::gaussian_add_parallel(7, 0, 1.0, buf.data(), n);
        });
        report("gaussian 4M", ts, tp);
    }
    {
        const auto x = random_vec(1u << 22, 5);
        const double ts = best_of(3, [&] {
            (void)kernels::moments_serial(x.data(), x.size());
        });
        const double tp = best_of(3, [&] {
            (void)kernels::moments_parallel(x.data(), x.size());
        });
        report("moments 4M", ts, tp);
    }
    {
        const std::size_t n = 1u << 22;
        const double ts = best_of(3, [&] {
            (void)kernels::polarity_errors_serial(11, 0, n, 3.0, 1.0);
        });
        const double tp = best_of(3, [&] {
            (void)kernels::polarity_errors_parallel(11, 0, n, 3.0, 1.0);
        });
        report("polarity MC 4M", ts, tp);
    }
    return 0;
}
