#pragma once

#include <array>
#include <vector>

#include "gausskey/model.hpp"
#include "gausskey/quantizer.hpp"

namespace gausskey {

// Exact per-cell probabilities for both observation channels plus the joint
// reliability-pair weights P(W_A = w_a, W_B = w_b).
struct CellTable {
    ModelParams params;
    Thresholds thresholds;
    // Index 0 holds u = -1, index 1 holds u = +1.
    std::array<std::vector<double>, 2> level_a;  // P(W_A = w | u)
    std::array<std::vector<double>, 2> level_b;  // P(W_B = w | u)
    std::array<std::vector<double>, 2> bit1_a;   // P(bit = 1, W_A = w | u)
    std::array<std::vector<double>, 2> bit1_b;   // P(bit = 1, W_B = w | u)
    std::vector<double> joint;                   // row-major, w_a * (K+1) + w_b

    int k() const { return thresholds.level_count(); }
    int levels() const { return k() + 1; }
    double joint_at(int w_a, int w_b) const {
        return joint[static_cast<std::size_t>(w_a) * static_cast<std::size_t>(levels()) + static_cast<std::size_t>(w_b)];
    }
};

CellTable build_cell_table(const ModelParams& params, const Thresholds& t);

// Whose hard bit is being estimated.
enum class Party { Alice, Bob };

// Whose observation conditions the estimate: the other legitimate party
// (range restricted to its own reliability band) or Eve (all of R).
enum class Observer { Partner, Eve };

// P(hard bit of `target` = 1 | observation, W_A = w_a, W_B = w_b).
double posterior_bit(Party target, Observer obs_kind, double obs, int w_a, int w_b,
                     const CellTable& tab);

// H(target bit | observer signal, W_A = w_a, W_B = w_b) in bits, by adaptive
// quadrature over the observer's conditional law.
double conditional_bit_entropy(Party target, Observer obs_kind, int w_a, int w_b,
                               const CellTable& tab);

enum class CellUse { UseX, UseY, Discard };

// The four conditional entropies of one reliability pair.
struct CellEntropies {
    double x_given_z = 0.0;
    double x_given_y = 0.0;
    double y_given_z = 0.0;
    double y_given_x = 0.0;
};

// Keep Alice's bit iff its Eve-minus-partner gap weakly dominates; Bob's iff
// it strictly dominates; otherwise discard. Ties go to Alice's side.
CellUse classify_cell(const CellEntropies& h, double* diff_x = nullptr, double* diff_y = nullptr);

struct CellClassification {
    int k = 0;
    std::vector<CellUse> labels;       // row-major, w_a * (K+1) + w_b
    std::vector<CellEntropies> h;

    int levels() const { return k + 1; }
    std::size_t idx(int w_a, int w_b) const {
        return static_cast<std::size_t>(w_a) * static_cast<std::size_t>(levels()) + static_cast<std::size_t>(w_b);
    }
    CellUse label(int w_a, int w_b) const { return labels[idx(w_a, w_b)]; }
};

// Secret-key-rate lower bound: sum over reliability pairs of
// P(pair) * max{0, diff_x(pair), diff_y(pair)}, in bits per satellite symbol.
struct RateReport {
    ModelParams params;
    Thresholds thresholds;
    CellClassification classification;
    std::vector<double> weights;        // P(w_a, w_b), same order as labels
    std::vector<double> diff_x;
    std::vector<double> diff_y;
    std::vector<double> contributions;  // weight * max{0, diff_x, diff_y}
    double soft_rate = 0.0;

    // Aggregate entropies used for reconciliation/key sizing.
    double h_xd_given_yw = 0.0;   // H(X_D | Y, W_A, W_B)
    double h_yd_given_xw = 0.0;   // H(Y_D | X, W_A, W_B)
    double h_pair_given_zw = 0.0; // H(X_D, Y_D | Z, W_A, W_B)
};

RateReport soft_rate_lower_bound(const ModelParams& params, const Thresholds& t);

// Truncation point of the infinite conditioning ranges; the discarded
// Gaussian tail mass is below 1e-14.
double observation_truncation(double amplitude, double var);

inline constexpr double kQuadTailMassBound = 1e-14;

}  // namespace gausskey
