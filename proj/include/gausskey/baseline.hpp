#pragma once

#include <vector>

#include "gausskey/model.hpp"

namespace gausskey {

// How a Gaussian channel is reduced to a binary symmetric channel.
// Exact uses the true flip probability of a unit signal, PaperErfc the
// conventional (1/2) erfc(sqrt(1/v)) form.
enum class ConversionMode { Exact, PaperErfc };

struct BscTriple {
    double eps_a;
    double eps_b;
    double eps_e;
};

double bsc_crossover(double v, ConversionMode mode);
BscTriple to_bsc(const ModelParams& params, ConversionMode mode);

// Block-length-1 hard-decision rate against a continuous-observation
// eavesdropper; equals the soft bound with the K = 0 quantizer.
double hard_rate_n1(const ModelParams& params);

// Repetition-code advantage distillation over three binary symmetric
// channels, evaluated by exact finite enumeration (no sampling).
double bsc_repetition_rate(int n_rep, const BscTriple& t);

struct BaselineReport {
    std::vector<std::pair<int, double>> rate_per_n;  // (block length, rate)
    int best_n = 1;
    double best_rate = 0.0;
};

// Rates for block lengths 1..n_max; N = 1 keeps the Gaussian eavesdropper,
// N >= 2 uses the converted BSC triple.
BaselineReport optimal_block_length(const ModelParams& params, int n_max, ConversionMode mode);

}  // namespace gausskey
