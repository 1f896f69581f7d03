#pragma once

#include <functional>
#include <vector>

namespace rmtlab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes ascending. Computed by Newton iteration
/// on the three-term recurrence; accurate to a few ulps for n up to ~10^4.
GaussLegendreRule gauss_legendre(int n);

/// Fixed-rule integral of f over [lo, hi].
double integrate_gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                                const GaussLegendreRule& rule);

/// Adaptive double-exponential quadrature over [lo, hi]. Tolerates integrable
/// endpoint singularities (square-root edges, x^{-1/2} hard edges).
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10);

}  // namespace rmtlab
