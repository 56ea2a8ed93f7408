#include "pulselink/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "pulselink/errors.hpp"

namespace pulselink::spectral {

namespace {
std::mutex plan_mutex;

std::vector<std::complex<double>> rfft(std::span<const double> x,
                                       std::size_t nfft) {
    if (nfft == 0) throw invalid_input("rfft: nfft must be > 0");
    std::vector<double> in(nfft, 0.0);
    const std::size_t ncopy = std::min(x.size(), nfft);
    std::copy_n(x.data(), ncopy, in.begin());
    std::vector<std::complex<double>> out(nfft / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}
}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> magnitude_spectrum(std::span<const double> x,
                                       std::size_t nfft) {
    auto spec = rfft(x, nfft);
    std::vector<double> mag(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) mag[i] = std::abs(spec[i]);
    return mag;
}

std::vector<double> power_spectrum(std::span<const double> x,
                                   std::size_t nfft) {
    auto spec = rfft(x, nfft);
    std::vector<double> pow(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) pow[i] = std::norm(spec[i]);
    return pow;
}

double magnitude_deviation(const std::vector<double>& a,
                           const std::vector<double>& b, double guard_rel) {
    if (a.size() != b.size())
        throw invalid_input("magnitude_deviation: bin count mismatch");
    const double peak = *std::max_element(a.begin(), a.end());
    const double guard = guard_rel * peak;
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < guard) continue;
        dev = std::max(dev, std::fabs(b[i] - a[i]) / a[i]);
    }
    return dev;
}

double kernel_spectral_deviation(std::span<const double> a,
                                 std::span<const double> b, double guard_rel) {
    const std::size_t nfft = next_pow2(4 * std::max(a.size(), b.size()));
    return magnitude_deviation(magnitude_spectrum(a, nfft),
                               magnitude_spectrum(b, nfft), guard_rel);
}

}  // namespace pulselink::spectral
