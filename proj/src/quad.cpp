#include "collector/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace collector {

namespace {

// Eigenvalues/first eigenvector components of a symmetric tridiagonal matrix
// by the implicit-shift QL algorithm (EISPACK tql2 lineage). d is the
// diagonal, e the off-diagonal (e[0] unused); z receives the first row of
// the eigenvector matrix, needed for Golub-Welsch weights.
void tql2_first_row(std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    z.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0) return;
    std::vector<double> zfull(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) zfull[static_cast<std::size_t>(i) * n + i] = 1.0;

    for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(n - 1)] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw std::runtime_error("tql2: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        double* zi = &zfull[static_cast<std::size_t>(k) * n];
                        f = zi[i + 1];
                        zi[i + 1] = s * zi[i] + c * f;
                        zi[i] = c * zi[i] - s * f;
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    // sort ascending, carrying first-row components
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = zfull[static_cast<std::size_t>(i)];
    for (int i = 1; i < n; ++i) {
        double dk = d[static_cast<std::size_t>(i)];
        double zk = z[static_cast<std::size_t>(i)];
        int j = i - 1;
        while (j >= 0 && d[static_cast<std::size_t>(j)] > dk) {
            d[static_cast<std::size_t>(j + 1)] = d[static_cast<std::size_t>(j)];
            z[static_cast<std::size_t>(j + 1)] = z[static_cast<std::size_t>(j)];
            --j;
        }
        d[static_cast<std::size_t>(j + 1)] = dk;
        z[static_cast<std::size_t>(j + 1)] = zk;
    }
}

} // namespace

LaguerreRule gauss_laguerre(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be >= 1");
    if (alpha <= -1.0) throw std::invalid_argument("gauss_laguerre: alpha must be > -1");
    std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n), 0.0), z;
    for (int k = 0; k < n; ++k) {
        d[static_cast<std::size_t>(k)] = 2.0 * k + 1.0 + alpha;
        if (k > 0) e[static_cast<std::size_t>(k)] = std::sqrt(k * (k + alpha));
    }
    tql2_first_row(d, e, z);
    LaguerreRule rule;
    rule.nodes = d;
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mu0 = std::tgamma(alpha + 1.0); // total weight mass
    for (int k = 0; k < n; ++k)
        rule.weights[static_cast<std::size_t>(k)] =
            mu0 * z[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(k)];
    return rule;
}

double gamma_expect(double h, double a, const std::function<double(double)>& f, int n) {
    const LaguerreRule rule = gauss_laguerre(n, h - 1.0);
    const double norm = std::tgamma(h);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * f(a * rule.nodes[k]);
    return acc / norm;
}

double gamma_product_expect(double h1, double a1, double h2, double a2,
                            const std::function<double(double)>& f, int n) {
    const LaguerreRule r1 = gauss_laguerre(n, h1 - 1.0);
    const LaguerreRule r2 = gauss_laguerre(n, h2 - 1.0);
    const double norm = std::tgamma(h1) * std::tgamma(h2);
    double acc = 0.0;
    for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
        const double xi = a1 * r1.nodes[i];
        double inner = 0.0;
        for (std::size_t j = 0; j < r2.nodes.size(); ++j)
            inner += r2.weights[j] * f(xi * a2 * r2.nodes[j]);
        acc += r1.weights[i] * inner;
    }
    return acc / norm;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol);
}

double integrate_positive_axis(const std::function<double(double)>& f,
                               double rel_tol) {
    // substitute x = e^t; integrate over a generous window in t, expanding
    // until the boundary contribution is negligible
    auto g = [&f](double t) {
        const double x = std::exp(t);
        return f(x) * x;
    };
    double lo = -40.0, hi = 40.0;
    return integrate(g, lo, hi, rel_tol);
}

} // namespace collector
