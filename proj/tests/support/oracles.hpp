#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

// Reference implementations used only by the tests: quadrature, normal
// distribution helpers and small statistical utilities. Everything here is
// written from scratch so library results are checked against independent
// code paths rather than against themselves.

namespace oracle {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

//! Gauss-Legendre rule of order n via Newton iteration on P_n. Nodes are
//! accurate to machine precision for the orders used here (n <= 64).
inline GaussLegendre gauss_legendre(std::size_t n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

//! Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        std::size_t panels = 16, std::size_t order = 20) {
    static const GaussLegendre gl20 = gauss_legendre(20);
    const GaussLegendre gl = order == 20 ? gl20 : gauss_legendre(order);
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h, half = 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
        total += acc * half;
    }
    return total;
}

inline double normal_pdf(double x, double mean, double variance) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * kPi * variance);
}

inline double normal_cdf(double x, double mean, double variance) {
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

//! Quantile by bisection on the cdf; enough precision for cell edges.
inline double normal_quantile(double p, double mean, double variance) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
    const double sd = std::sqrt(variance);
    double lo = mean - 12.0 * sd, hi = mean + 12.0 * sd;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid, mean, variance) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

//! Upper critical value of the chi-square distribution (Wilson-Hilferty).
inline double chi_square_upper(double dof, double z_upper) {
    const double a = 2.0 / (9.0 * dof);
    const double c = 1.0 - a + z_upper * std::sqrt(a);
    return dof * c * c * c;
}

//! Sample mean and unbiased variance.
struct Moments {
    double mean;
    double variance;
};

inline Moments moments(const std::vector<double>& xs) {
    double s = 0.0;
    for (const double x : xs) s += x;
    const double m = s / static_cast<double>(xs.size());
    double q = 0.0;
    for (const double x : xs) q += (x - m) * (x - m);
    return {m, xs.size() > 1 ? q / static_cast<double>(xs.size() - 1) : 0.0};
}

} // namespace oracle
