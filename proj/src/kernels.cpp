#include "pulselink/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "pulselink/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pulselink::kernels {

namespace {
// Below these sizes the parallel versions are not worth the fork/join.
constexpr std::size_t kConvolveCutoff = 1u << 22;  // nx*nh
constexpr std::size_t kElementCutoff = 1u << 16;
}  // namespace

void convolve_serial(const double* x, std::size_t nx, const double* h,
                     std::size_t nh, double* out) {
    const std::size_t nout = nx + nh - 1;
    for (std::size_t n = 0; n < nout; ++n) {
        const std::size_t m_lo = n >= nh - 1 ? n - (nh - 1) : 0;
        const std::size_t m_hi = std::min(n, nx - 1);
        double acc = 0.0;
        for (std::size_t m = m_lo; m <= m_hi; ++m) acc += x[m] * h[n - m];
        out[n] = acc;
    }
}

void convolve_parallel(const double* x, std::size_t nx, const double* h,
                       std::size_t nh, double* out) {
    const std::int64_t nout = static_cast<std::int64_t>(nx + nh - 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 0; n < nout; ++n) {
        const std::size_t un = static_cast<std::size_t>(n);
        const std::size_t m_lo = un >= nh - 1 ? un - (nh - 1) : 0;
        const std::size_t m_hi = std::min(un, nx - 1);
        double acc = 0.0;
        for (std::size_t m = m_lo; m <= m_hi; ++m) acc += x[m] * h[un - m];
        out[n] = acc;
    }
}

void convolve(const double* x, std::size_t nx, const double* h,
              std::size_t nh, double* out) {
    if (nx * nh >= kConvolveCutoff)
        convolve_parallel(x, nx, h, nh, out);
    else
        convolve_serial(x, nx, h, nh, out);
}

void render_add_serial(const std::int64_t* arrivals, const double* amps,
                       std::size_t n_pulses, const double* taps,
                       std::size_t nh, double* out, std::size_t nout) {
    for (std::size_t k = 0; k < n_pulses; ++k) {
        const std::int64_t t = arrivals[k];
        const double a = amps[k];
        const std::size_t hi =
            std::min(nh, nout > static_cast<std::size_t>(t)
                             ? nout - static_cast<std::size_t>(t)
                             : 0);
        double* dst = out + t;
        for (std::size_t i = 0; i < hi; ++i) dst[i] += a * taps[i];
    }
}

void render_add_parallel(const std::int64_t* arrivals, const double* amps,
                         std::size_t n_pulses, const double* taps,
                         std::size_t nh, double* out, std::size_t nout) {
    // Threads own disjoint output blocks; each block accumulates the pulses
    // overlapping it in arrival order, matching the serial summation order
    // per sample.
    const std::int64_t block = std::max<std::int64_t>(4096, static_cast<std::int64_t>(nh));
    const std::int64_t nblocks = (static_cast<std::int64_t>(nout) + block - 1) / block;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * block;
        const std::int64_t hi = std::min<std::int64_t>(lo + block, nout);
        // first arrival that can reach lo: t > lo - nh
        const std::int64_t* first = std::upper_bound(
            arrivals, arrivals + n_pulses, lo - static_cast<std::int64_t>(nh));
        for (const std::int64_t* p = first; p != arrivals + n_pulses && *p < hi; ++p) {
            const std::size_t k = static_cast<std::size_t>(p - arrivals);
            const std::int64_t t = arrivals[k];
            const double a = amps[k];
            const std::int64_t i_lo = std::max<std::int64_t>(0, lo - t);
            const std::int64_t i_hi = std::min<std::int64_t>(nh, hi - t);
            for (std::int64_t i = i_lo; i < i_hi; ++i) out[t + i] += a * taps[i];
        }
    }
}

void render_add(const std::int64_t* arrivals, const double* amps,
                std::size_t n_pulses, const double* taps, std::size_t nh,
                double* out, std::size_t nout) {
    if (n_pulses * nh >= kConvolveCutoff)
        render_add_parallel(arrivals, amps, n_pulses, taps, nh, out, nout);
    else
        render_add_serial(arrivals, amps, n_pulses, taps, nh, out, nout);
}

void gaussian_add_serial(std::uint64_t seed, std::uint64_t first_index,
                         double scale, double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        data[i] += scale * rng::gaussian(seed, first_index + i);
}

void gaussian_add_parallel(std::uint64_t seed, std::uint64_t first_index,
                           double scale, double* data, std::size_t n) {
    const std::int64_t sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < sn; ++i)
        data[i] += scale * rng::gaussian(seed, first_index + static_cast<std::uint64_t>(i));
}

void gaussian_add(std::uint64_t seed, std::uint64_t first_index, double scale,
                  double* data, std::size_t n) {
    if (n >= kElementCutoff)
        gaussian_add_parallel(seed, first_index, scale, data, n);
    else
        gaussian_add_serial(seed, first_index, scale, data, n);
}

namespace {
Moments combine_mean(double n, double mean, double s2, double s3, double s4) {
    Moments m;
    m.n = n;
    m.mean = mean;
    m.m2 = s2 / n;
    m.m3 = s3 / n;
    m.m4 = s4 / n;
    return m;
}
}  // namespace

Moments moments_serial(const double* x, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i];
    const double mean = sum / static_cast<double>(n);
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    return combine_mean(static_cast<double>(n), mean, s2, s3, s4);
}

Moments moments_parallel(const double* x, std::size_t n) {
    const std::int64_t sn = static_cast<std::int64_t>(n);
    double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) sum += x[i];
    const double mean = sum / static_cast<double>(n);
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
#pragma omp parallel for reduction(+ : s2, s3, s4) schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    return combine_mean(static_cast<double>(n), mean, s2, s3, s4);
}

Moments moments(const double* x, std::size_t n) {
    return n >= kElementCutoff ? moments_parallel(x, n) : moments_serial(x, n);
}

Power power_serial(const double* x, std::size_t n) {
    Power p;
    for (std::size_t i = 0; i < n; ++i) {
        const double sq = x[i] * x[i];
        p.sum_sq += sq;
        if (sq > p.max_sq) p.max_sq = sq;
    }
    return p;
}

Power power_parallel(const double* x, std::size_t n) {
    const std::int64_t sn = static_cast<std::int64_t>(n);
    double sum = 0.0, mx = 0.0;
#pragma omp parallel for reduction(+ : sum) reduction(max : mx) schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) {
        const double sq = x[i] * x[i];
        sum += sq;
        if (sq > mx) mx = sq;
    }
    return Power{mx, sum};
}

Power power(const double* x, std::size_t n) {
    return n >= kElementCutoff ? power_parallel(x, n) : power_serial(x, n);
}

std::uint64_t polarity_errors_serial(std::uint64_t seed,
                                     std::uint64_t first_index, std::size_t n,
                                     double amplitude, double sigma) {
    std::uint64_t errs = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (amplitude + sigma * rng::gaussian(seed, first_index + i) < 0.0)
            ++errs;
    return errs;
}

std::uint64_t polarity_errors_parallel(std::uint64_t seed,
                                       std::uint64_t first_index,
                                       std::size_t n, double amplitude,
                                       double sigma) {
    const std::int64_t sn = static_cast<std::int64_t>(n);
    std::uint64_t errs = 0;
#pragma omp parallel for reduction(+ : errs) schedule(static)
    for (std::int64_t i = 0; i < sn; ++i)
        if (amplitude + sigma * rng::gaussian(
                            seed, first_index + static_cast<std::uint64_t>(i)) <
            0.0)
            ++errs;
    return errs;
}

std::uint64_t polarity_errors(std::uint64_t seed, std::uint64_t first_index,
                              std::size_t n, double amplitude, double sigma) {
    return n >= kElementCutoff
               ? polarity_errors_parallel(seed, first_index, n, amplitude, sigma)
               : polarity_errors_serial(seed, first_index, n, amplitude, sigma);
}

}  // namespace pulselink::kernels
