#include "collector/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace collector {

Mat2 mean_matrix(const Policy& p, const MeanSpec& m) {
    const double l = p.lambda, t = p.theta;
    return {1.0 - l + m.gamma * l * t, m.beta * t,
            m.alpha * l * (1.0 - t), 1.0 - t};
}

double mu(const Policy& p, double gamma) {
    const double l = p.lambda, t = p.theta;
    // Two algebraically equal forms; the second is better conditioned for
    // gamma >= 1, the first for gamma < 1.
    if (gamma >= 1.0) {
        const double s = l + t - gamma * l * t;
        return 0.5 * (2.0 - l - t + gamma * l * t +
                      std::sqrt(s * s + 4.0 * (gamma - 1.0) * l * t));
    }
    const double s = t - l + l * t * gamma;
    return 0.5 * (2.0 - l - t + gamma * l * t +
                  std::sqrt(s * s + 4.0 * l * t * (1.0 - t) * gamma));
}

double mu_general(const Policy& p, double gamma, double alpha_beta) {
    const double l = p.lambda, t = p.theta;
    const double s = t - l + l * t * gamma;
    return 0.5 * (2.0 - l - t + gamma * l * t +
                  std::sqrt(s * s + 4.0 * l * t * (1.0 - t) * alpha_beta));
}

double mu_dlambda(const Policy& p, double gamma) {
    const double l = p.lambda, t = p.theta;
    const double s = l + t - gamma * l * t;
    const double rad = std::sqrt(s * s + 4.0 * (gamma - 1.0) * l * t);
    return 0.5 * (gamma * t - 1.0 +
                  ((1.0 - gamma * t) * s + 2.0 * (gamma - 1.0) * t) / rad);
}

std::pair<int, int> mu_gradient_signs(const Policy& p, double gamma) {
    if (p.lambda * p.theta == 0.0 || p.theta == 1.0)
        throw std::invalid_argument("mu_gradient_signs: boundary policy rejected");
    const double dl = mu_dlambda(p, gamma);
    const double dt = mu_dlambda(Policy{p.theta, p.lambda}, gamma); // mu is symmetric
    auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
    return {sgn(dl), sgn(dt)};
}

std::vector<Vec2> mean_trajectory(const Policy& p, const MeanSpec& m, double u0, double v0,
                                  long n) {
    if (!(u0 >= 0.0 && v0 >= 0.0 && u0 + v0 > 0.0))
        throw std::invalid_argument("mean_trajectory: need U0,V0 >= 0 with U0+V0 > 0");
    const Mat2 M = mean_matrix(p, m);
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    Vec2 s{u0, v0};
    out.push_back(s);
    for (long k = 0; k < n; ++k) {
        s = M.apply(s);
        out.push_back(s);
    }
    return out;
}

GammaOneLimits gamma_one_limits(const Policy& p, const MeanSpec& m, double u0, double v0) {
    if (std::fabs(m.gamma - 1.0) > 1e-12)
        throw std::invalid_argument("gamma_one_limits: requires gamma = 1");
    const double l = p.lambda, t = p.theta;
    const double den = t + l * (1.0 - t);
    GammaOneLimits out{};
    out.u_limit = t / den * (u0 + m.beta * v0);
    out.v_limit = l * (1.0 - t) / den * (m.alpha * u0 + v0);
    // razor edge lambda = beta*theta*V0 / ((1-theta)*U0); infinite if U0 = 0
    // or theta = 1
    double edge;
    if (u0 == 0.0 || t == 1.0)
        edge = std::numeric_limits<double>::infinity();
    else
        edge = m.beta * t * v0 / ((1.0 - t) * u0);
    const double tol = 1e-12 * std::fmax(1.0, std::fabs(edge));
    if (std::isfinite(edge) && std::fabs(l - edge) <= tol)
        out.monotonicity = MeanMonotonicity::constant;
    else if (l < edge)
        out.monotonicity = MeanMonotonicity::u_up_v_down;
    else
        out.monotonicity = MeanMonotonicity::u_down_v_up;
    return out;
}

double mu_first_order(const Policy& p, double xi) {
    const double l = p.lambda, t = p.theta;
    const double den = l + t - l * t;
    if (!(den > 0.0)) throw std::invalid_argument("mu_first_order: lambda+theta-lambda*theta must be positive");
    return 1.0 + xi * l * t / den;
}

} // namespace collector
