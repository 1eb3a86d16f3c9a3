#include "gausskey/model.hpp"

#include <cmath>

#include "gausskey/errors.hpp"

namespace gausskey {

void validate_params(const ModelParams& p) {
    if (!(p.v_a > 0.0) || !std::isfinite(p.v_a)) throw parameter_error("v_a must be positive and finite");
    if (!(p.v_b > 0.0) || !std::isfinite(p.v_b)) throw parameter_error("v_b must be positive and finite");
    if (!(p.v_e > 0.0) || !std::isfinite(p.v_e)) throw parameter_error("v_e must be positive and finite");
    if (!(p.amplitude > 0.0) || !std::isfinite(p.amplitude)) throw parameter_error("amplitude must be positive and finite");
}

ModelParams snr_nnr_to_params(double snr_db, double nnr) {
    if (!std::isfinite(snr_db)) throw parameter_error("snr_db must be finite");
    if (!(nnr > 0.0) || !std::isfinite(nnr)) throw parameter_error("nnr must be positive and finite");
    ModelParams p;
    p.v_a = std::pow(10.0, -snr_db / 10.0);
    p.v_b = p.v_a;
    p.v_e = nnr * p.v_b;
    p.amplitude = 1.0;
    return p;
}

double gaussian_cdf(double x, double mean, double var) {
    if (!(var > 0.0) || !std::isfinite(var)) throw parameter_error("gaussian_cdf: var must be positive and finite");
    if (std::isnan(x)) throw parameter_error("gaussian_cdf: x must not be NaN");
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    return 0.5 * std::erfc((mean - x) / std::sqrt(2.0 * var));
}

double erfc(double z) {
    if (std::isnan(z)) throw parameter_error("erfc: argument must not be NaN");
    return std::erfc(z);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw parameter_error("binary_entropy: p must be in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p)) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace gausskey
