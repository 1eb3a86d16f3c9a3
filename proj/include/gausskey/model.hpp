#pragma once

namespace gausskey {

// Broadcast-channel parameters: a satellite sends +-1 with equal priors and
// Alice, Bob, Eve observe it through independent zero-mean Gaussian noise
// with variances v_a, v_b, v_e.
struct ModelParams {
    double v_a;
    double v_b;
    double v_e;
    double amplitude = 1.0;  // unit power constraint met with equality
};

// Throws parameter_error unless all variances are positive and finite.
void validate_params(const ModelParams& p);

// SNR = 1/v_a in dB with v_a = v_b assumed; NNR = v_e / v_b.
ModelParams snr_nnr_to_params(double snr_db, double nnr);

// P(N <= x) for N ~ normal(mean, var). Accepts +-inf, rejects NaN.
double gaussian_cdf(double x, double mean, double var);

// Complementary error function (2/sqrt(pi)) * integral_z^inf exp(-t^2) dt.
double erfc(double z);

// Binary entropy in bits, 0*log(0) = 0.
double binary_entropy(double p);

}  // namespace gausskey
