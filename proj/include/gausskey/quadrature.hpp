#pragma once

#include <array>
#include <cmath>

#include "gausskey/errors.hpp"

namespace gausskey {

namespace detail {

// 15-point Gauss-Legendre rule on [-1, 1], positive half stored.
inline constexpr std::array<double, 8> kGlNodes = {
    0.0,
    2.01194093997434514e-01,
    3.94151347077563385e-01,
    5.70972172608538830e-01,
    7.24417731360170070e-01,
    8.48206583410427206e-01,
    9.37273392400705951e-01,
    9.87992518020485377e-01,
};
inline constexpr std::array<double, 8> kGlWeights = {
    2.02578241925560898e-01,
    1.98431485327111246e-01,
    1.86161000015561878e-01,
    1.66269205816993781e-01,
    1.39570677926153908e-01,
    1.07159220467171773e-01,
    7.03660474881080689e-02,
    3.07532419961186465e-02,
};

template <class F>
double gl15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = kGlWeights[0] * f(c);
    for (std::size_t i = 1; i < kGlNodes.size(); ++i) {
        const double dx = h * kGlNodes[i];
        s += kGlWeights[i] * (f(c - dx) + f(c + dx));
    }
    return s * h;
}

template <class F>
double adapt_gl(F& f, double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gl15(f, a, m);
    const double right = gl15(f, m, b);
    const double refined = left + right;
    if (std::fabs(refined - whole) <= tol || b - a < 1e-14 * (1.0 + std::fabs(m)))
        return refined;
    if (depth <= 0) throw numerical_error("adaptive quadrature failed to converge");
    return adapt_gl(f, a, m, left, 0.5 * tol, depth - 1) +
           adapt_gl(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Legendre panels to an absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(a <= b)) throw parameter_error("integrate: requires a <= b");
    if (a == b) return 0.0;
    return detail::adapt_gl(f, a, b, detail::gl15(f, a, b), abs_tol, max_depth);
}

}  // namespace gausskey
