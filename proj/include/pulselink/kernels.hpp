#pragma once

#include <cstddef>
#include <cstdint>

// Hot inner loops, each in a serial reference version and an OpenMP version.
// The serial versions are the ground truth the parallel ones are tested
// against; public operations dispatch on problem size.
//
// convolve/render/gaussian parallelize per output element and produce
// bit-identical results to their serial counterparts. The reductions
// (moments, power, error counts) split into chunks, so float totals may
// differ from serial at rounding level; integer counts are exact.

namespace pulselink::kernels {

// out[n] = sum_m x[m] * h[n - m], n in [0, nx + nh - 1).
void convolve_serial(const double* x, std::size_t nx, const double* h,
                     std::size_t nh, double* out);
void convolve_parallel(const double* x, std::size_t nx, const double* h,
                       std::size_t nh, double* out);
void convolve(const double* x, std::size_t nx, const double* h,
              std::size_t nh, double* out);

// out[t_k + i] += a_k * taps[i] for every arrival; arrivals must be sorted.
void render_add_serial(const std::int64_t* arrivals, const double* amps,
                       std::size_t n_pulses, const double* taps,
                       std::size_t nh, double* out, std::size_t nout);
void render_add_parallel(const std::int64_t* arrivals, const double* amps,
                         std::size_t n_pulses, const double* taps,
                         std::size_t nh, double* out, std::size_t nout);
void render_add(const std::int64_t* arrivals, const double* amps,
                std::size_t n_pulses, const double* taps, std::size_t nh,
                double* out, std::size_t nout);

// data[i] += scale * gaussian(seed, first_index + i)
void gaussian_add_serial(std::uint64_t seed, std::uint64_t first_index,
                         double scale, double* data, std::size_t n);
void gaussian_add_parallel(std::uint64_t seed, std::uint64_t first_index,
                           double scale, double* data, std::size_t n);
void gaussian_add(std::uint64_t seed, std::uint64_t first_index, double scale,
                  double* data, std::size_t n);

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;  // central moments (population)
    double m3 = 0.0;
    double m4 = 0.0;
};

// Two-pass central moments.
Moments moments_serial(const double* x, std::size_t n);
Moments moments_parallel(const double* x, std::size_t n);
Moments moments(const double* x, std::size_t n);

struct Power {
    double max_sq = 0.0;
    double sum_sq = 0.0;
};

Power power_serial(const double* x, std::size_t n);
Power power_parallel(const double* x, std::size_t n);
Power power(const double* x, std::size_t n);

// Monte-Carlo polarity detection: counts draws i in [0, n) with
// amplitude + sigma * gaussian(seed, first_index + i) < 0.
std::uint64_t polarity_errors_serial(std::uint64_t seed,
                                     std::uint64_t first_index, std::size_t n,
                                     double amplitude, double sigma);
std::uint64_t polarity_errors_parallel(std::uint64_t seed,
                                       std::uint64_t first_index,
                                       std::size_t n, double amplitude,
                                       double sigma);
std::uint64_t polarity_errors(std::uint64_t seed, std::uint64_t first_index,
                              std::size_t n, double amplitude, double sigma);

}  // namespace pulselink::kernels
