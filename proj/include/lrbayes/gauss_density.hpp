#pragma once

#include <cmath>

#include "common.hpp"

//! Log-domain Gaussian building blocks. Everything that can underflow at
//! |x - mean| beyond a few standard deviations is kept in logs; callers
//! exponentiate ratios, not densities.

namespace lrbayes {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

//! log of the normal density at x.
inline double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

//! Standard normal CDF via the complementary error function; accurate in
//! both tails.
inline double normal_cdf(double x, double mean, double var) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

//! log(cosh(z)) without overflow for large |z|.
inline double log_cosh(double z) {
    const double a = std::fabs(z);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321214582;
}

//! log density of S = Z^2 at s > 0, Z ~ N(0, var): a chi-square with one
//! degree of freedom scaled by var.
inline double log_sqdiff_central(double s, double var) {
    return -0.5 * (kLog2Pi + std::log(var * s)) - s / (2.0 * var);
}

//! log density of S = Z^2 at s > 0, Z ~ N(delta, var): scaled noncentral
//! chi-square, one degree of freedom, written in its cosh form
//!   f(s) = exp(-(s + delta^2) / (2 var)) * cosh(delta sqrt(s) / var)
//!          / sqrt(2 pi var s).
inline double log_sqdiff_noncentral(double s, double var, double delta) {
    return -(s + delta * delta) / (2.0 * var) + log_cosh(delta * std::sqrt(s) / var) -
           0.5 * (kLog2Pi + std::log(var * s));
}

} // namespace lrbayes
