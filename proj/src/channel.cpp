#include "pulselink/channel.hpp"

#include <cmath>

#include "pulselink/errors.hpp"
#include "pulselink/kernels.hpp"
#include "pulselink/link.hpp"

namespace pulselink {

void NoiseSpec::check() const {
    if (!(sigma_n >= 0.0) || !std::isfinite(sigma_n))
        throw invalid_input("NoiseSpec: sigma_n must be finite and >= 0");
}

Waveform add_awgn(const Waveform& x, const NoiseSpec& spec,
                  std::uint64_t first_index) {
    spec.check();
    if (x.samples.empty()) throw invalid_input("add_awgn: empty waveform");
    Waveform y = x;
    if (spec.sigma_n > 0.0)
        kernels::gaussian_add(spec.seed, first_index, spec.sigma_n,
                              y.samples.data(), y.samples.size());
    return y;
}

NoiseSpec calibrate_sigma(const LinkPlan& plan, double target_snr_db,
                          std::uint64_t noise_seed) {
    if (!(plan.signal_power > 0.0))
        throw calibration_error("calibrate_sigma: zero signal power");
    if (!(plan.noise_gain > 0.0))
        throw calibration_error("calibrate_sigma: zero receive noise gain");
    const double snr = std::pow(10.0, target_snr_db / 10.0);
    NoiseSpec spec;
    spec.sigma_n = std::sqrt(plan.signal_power / (plan.noise_gain * snr));
    spec.seed = noise_seed;
    return spec;
}

}  // namespace pulselink
