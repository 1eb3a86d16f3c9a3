#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gausskey/model.hpp"

namespace gausskey {

// Reliability thresholds 0 < a_1 < ... < a_K defining nested bands around
// the origin. K = 0 is the degenerate hard-decision-only quantizer.
struct Thresholds {
    std::vector<double> a;

    int level_count() const { return static_cast<int>(a.size()); }
};

// Accepts a list iff it is finite, positive, and strictly increasing.
// The thrown validation_error names the offending index.
Thresholds validate_thresholds(std::span<const double> raw);

// One of the 2(K+1) intervals partitioning the real line.
struct Cell {
    int bit;    // hard decision, 0 or 1
    int level;  // reliability, 0..K
};

// 0 if |x| <= a_1, j if a_j < |x| <= a_{j+1}, K if |x| > a_K.
int reliability_level(double x, const Thresholds& t);

// 1 iff x >= 0.
int hard_bit(double x);

// Magnitude band [lo, hi] of a level; hi is +inf for the top level.
std::pair<double, double> level_band(int level, const Thresholds& t);

// P(X in cell | U = u) for X = u * amplitude + N(0, var), u in {-1,+1}.
double cell_prob(int u, Cell cell, double var, const Thresholds& t, double amplitude = 1.0);

// P(reliability = level | U = u), both hard bits summed.
double level_prob(int u, int level, double var, const Thresholds& t, double amplitude = 1.0);

}  // namespace gausskey
