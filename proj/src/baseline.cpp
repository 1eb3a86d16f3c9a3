#include "gausskey/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gausskey/entropy.hpp"
#include "gausskey/errors.hpp"
#include "gausskey/quantizer.hpp"

namespace gausskey {

namespace {

void check_triple(const BscTriple& t) {
    for (double e : {t.eps_a, t.eps_b, t.eps_e})
        if (!(e > 0.0 && e <= 0.5)) throw parameter_error("crossover probabilities must lie in (0, 0.5]");
}

double binom_pmf(int n, int k, double p) {
    // n stays small (repetition blocks), direct product is exact enough.
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace

double bsc_crossover(double v, ConversionMode mode) {
    if (!(v > 0.0) || !std::isfinite(v)) throw parameter_error("bsc_crossover: variance must be positive and finite");
    if (mode == ConversionMode::PaperErfc) return 0.5 * erfc(std::sqrt(1.0 / v));
    return 0.5 * erfc(1.0 / std::sqrt(2.0 * v));  // = P(N(0,v) < -1)
}

BscTriple to_bsc(const ModelParams& params, ConversionMode mode) {
    validate_params(params);
    return BscTriple{bsc_crossover(params.v_a, mode), bsc_crossover(params.v_b, mode),
                     bsc_crossover(params.v_e, mode)};
}

double hard_rate_n1(const ModelParams& params) {
    return soft_rate_lower_bound(params, Thresholds{}).soft_rate;
}

double bsc_repetition_rate(int n_rep, const BscTriple& t) {
    if (n_rep <= 0) throw parameter_error("bsc_repetition_rate: block length must be >= 1");
    check_triple(t);
    const double ea = t.eps_a, eb = t.eps_b, ee = t.eps_e;

    // Per position, d = (Alice xor Bob) disagreement and g = (Alice xor Eve):
    // joint law from the 8 noise-flip combinations.
    const double p_d0g0 = (1 - ea) * (1 - eb) * (1 - ee) + ea * eb * ee;
    const double p_d0g1 = (1 - ea) * (1 - eb) * ee + ea * eb * (1 - ee);
    const double p_d1g0 = (1 - ea) * eb * (1 - ee) + ea * (1 - eb) * ee;
    const double p_d1g1 = (1 - ea) * eb * ee + ea * (1 - eb) * (1 - ee);
    const double eps_xy = p_d1g0 + p_d1g1;
    const double q0 = p_d0g1 / (p_d0g0 + p_d0g1);  // P(g = 1 | d = 0)
    const double q1 = p_d1g1 / (p_d1g0 + p_d1g1);  // P(g = 1 | d = 1)

    // Bob accepts iff the public block XORs to a constant vector: either all
    // positions agree (he decodes correctly) or all disagree (he flips).
    const int n = n_rep;
    const double p_agree = std::pow(1.0 - eps_xy, n);
    const double p_flip = std::pow(eps_xy, n);
    const double p_accept = p_agree + p_flip;
    if (!(p_accept > 0.0)) return 0.0;
    const double pi_ok = p_agree / p_accept;

    // Bob's ambiguity: his decoded bit differs from the hidden bit exactly on
    // the all-disagree acceptances.
    const double h_c_given_bob = binary_entropy(p_flip / p_accept);

    // Eve's sufficient statistic is the number of ones in her block XOR the
    // public message; its law given the hidden bit c mixes the two acceptance
    // types, and c = 1 mirrors the count.
    double h_c_given_eve = 0.0;
    for (int cnt = 0; cnt <= n; ++cnt) {
        const double p_given_0 = pi_ok * binom_pmf(n, cnt, q0) + (1.0 - pi_ok) * binom_pmf(n, cnt, q1);
        const double p_given_1 =
            pi_ok * binom_pmf(n, n - cnt, q0) + (1.0 - pi_ok) * binom_pmf(n, n - cnt, q1);
        const double p_cnt = 0.5 * (p_given_0 + p_given_1);
        if (p_cnt <= 0.0) continue;
        h_c_given_eve += p_cnt * binary_entropy(0.5 * p_given_0 / p_cnt);
    }

    return (p_accept / static_cast<double>(n)) * std::max(0.0, h_c_given_eve - h_c_given_bob);
}

BaselineReport optimal_block_length(const ModelParams& params, int n_max, ConversionMode mode) {
    if (n_max < 1) throw parameter_error("optimal_block_length: n_max must be >= 1");
    BaselineReport rep;
    const BscTriple triple = to_bsc(params, mode);
    for (int n = 1; n <= n_max; ++n) {
        const double r = n == 1 ? hard_rate_n1(params) : bsc_repetition_rate(n, triple);
        rep.rate_per_n.emplace_back(n, r);
        if (n == 1 || r > rep.best_rate) {
            rep.best_rate = r;
            rep.best_n = n;
        }
    }
    return rep;
}

}  // namespace gausskey
