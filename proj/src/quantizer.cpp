#include "gausskey/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gausskey/errors.hpp"

namespace gausskey {

Thresholds validate_thresholds(std::span<const double> raw) {
    Thresholds t;
    t.a.assign(raw.begin(), raw.end());
    double prev = 0.0;
    for (std::size_t i = 0; i < t.a.size(); ++i) {
        const double v = t.a[i];
        if (!std::isfinite(v))
            throw validation_error("threshold at index " + std::to_string(i) + " is not finite", i);
        if (!(v > 0.0))
            throw validation_error("threshold at index " + std::to_string(i) + " must be positive", i);
        if (!(v > prev))
            throw validation_error("threshold at index " + std::to_string(i) + " must exceed its predecessor", i);
        prev = v;
    }
    return t;
}

int reliability_level(double x, const Thresholds& t) {
    const double m = std::fabs(x);
    // Level = number of thresholds strictly below |x|; ties go to the lower level.
    const auto it = std::lower_bound(t.a.begin(), t.a.end(), m);
    return static_cast<int>(it - t.a.begin());
}

int hard_bit(double x) { return x >= 0.0 ? 1 : 0; }

std::pair<double, double> level_band(int level, const Thresholds& t) {
    const int k = t.level_count();
    if (level < 0 || level > k) throw parameter_error("level out of range");
    const double lo = level == 0 ? 0.0 : t.a[static_cast<std::size_t>(level) - 1];
    const double hi = level == k ? std::numeric_limits<double>::infinity() : t.a[static_cast<std::size_t>(level)];
    return {lo, hi};
}

double cell_prob(int u, Cell cell, double var, const Thresholds& t, double amplitude) {
    if (u != 1 && u != -1) throw parameter_error("u must be -1 or +1");
    if (cell.bit != 0 && cell.bit != 1) throw parameter_error("cell bit must be 0 or 1");
    const auto [lo, hi] = level_band(cell.level, t);
    const double mean = u * amplitude;
    double p;
    if (cell.bit == 1) {
        p = gaussian_cdf(hi, mean, var) - gaussian_cdf(lo, mean, var);
    } else {
        p = gaussian_cdf(-lo, mean, var) - gaussian_cdf(-hi, mean, var);
    }
    return std::max(p, 0.0);
}

double level_prob(int u, int level, double var, const Thresholds& t, double amplitude) {
    return cell_prob(u, Cell{0, level}, var, t, amplitude) +
           cell_prob(u, Cell{1, level}, var, t, amplitude);
}

}  // namespace gausskey
