#pragma once

#include <stdexcept>
#include <string>

namespace gausskey {

// Parameter outside its mathematical domain (non-positive variance,
// probability outside [0,1], malformed sizes).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input validation failure that points at a specific entry.
struct validation_error : parameter_error {
    validation_error(const std::string& msg, std::size_t bad_index)
        : parameter_error(msg), index(bad_index) {}
    std::size_t index;
};

// Request exceeds the desk-scale limits of an exhaustive algorithm.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (quadrature non-convergence, degenerate computation).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conditioning on a zero-probability event.
struct undefined_conditional_error : numerical_error {
    using numerical_error::numerical_error;
};

}  // namespace gausskey
