#pragma once

namespace pulselink::theory {

// Complementary error function, accurate to a few ulp for x in [-6, 26.5].
// Does not rely on any platform math library beyond exp().
double erfc(double x);

// Inverse of erfc on (0, 2). Logarithmic initial guess refined by Newton
// iterations on erfc until the update stalls (<= 1e-15 relative).
// Throws std::domain_error outside (0, 2).
double erfc_inv(double y);

// Polarity-detection error rate of a pulse of magnitude a_abs in Gaussian
// noise of std deviation sigma_n: 0.5*erfc(a_abs/(sigma_n*sqrt(2))).
double ber_for_amplitude(double a_abs, double sigma_n);

// Asymptotic PAPR of a regular train of beta=1/2 raised-cosine pulses:
// 1.143 * n_p / n_s. Valid for n_p/n_s >= 8; throws model_range_error below.
double papr_model(double n_p, double n_s);

struct PaprSource {
    enum class Kind { model, measured };
    Kind kind = Kind::model;
    double value = 0.0;  // used when kind == measured

    static PaprSource model() { return {Kind::model, 0.0}; }
    static PaprSource measured(double papr) { return {Kind::measured, papr}; }
};

struct SnrLimitQuery {
    double n_p = 0.0;
    double n_s = 0.0;
    double target_ber = 0.0;  // in (0, 1/2)
    PaprSource papr_source = PaprSource::model();
};

// Lower SNR limit (dB) for an uncoded train at the queried BER:
// 2*[erfc_inv(2*BER)]^2 / PAPR.
double snr_limit_db(const SnrLimitQuery& query);

// Minimal SNR (dB) at which Shannon capacity of bandwidth F_s/(2*n_s)
// supports one bit per pulse period: SNR = 2^(2*n_s/n_p) - 1.
double shannon_snr_floor_db(double n_p, double n_s);

// Power-limited AWGN capacity, bits/s: p_bar / (n0 * ln 2).
double power_limited_capacity(double p_bar, double n0);

}  // namespace pulselink::theory
