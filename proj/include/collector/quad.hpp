#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace collector {

/// Nodes and weights for generalized Gauss-Laguerre quadrature with weight
/// x^alpha e^{-x} on (0,inf), normalized so that weights sum to Gamma(alpha+1).
/// Golub-Welsch on the Jacobi matrix of the recurrence.
struct LaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
LaguerreRule gauss_laguerre(int n, double alpha);

/// Expectation of f under Gamma(shape h, scale a), by generalized
/// Gauss-Laguerre with alpha = h-1 (exact for polynomial f up to degree 2n-1).
double gamma_expect(double h, double a, const std::function<double(double)>& f,
                    int n = 160);

/// Expectation of f(eps*delta) for independent eps ~ Gamma(h1,a1),
/// delta ~ Gamma(h2,a2); tensorized Gauss-Laguerre.
double gamma_product_expect(double h1, double a1, double h2, double a2,
                            const std::function<double(double)>& f, int n = 160);

/// Adaptive integral of f over [a,b] (Gauss-Kronrod panels).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Integral of f over (0,inf) for integrands decaying at both ends;
/// log-substituted adaptive panels.
double integrate_positive_axis(const std::function<double(double)>& f,
                               double rel_tol = 1e-12);

} // namespace collector
