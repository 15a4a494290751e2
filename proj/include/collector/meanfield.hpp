#pragma once

#include "collector/dynamics.hpp"
#include "collector/mat2.hpp"

#include <optional>
#include <vector>

namespace collector {

/// First moments of the environment: alpha = E(eps), beta = E(delta),
/// gamma = E(eps*delta) (= alpha*beta under independent margins).
struct MeanSpec {
    double alpha;
    double beta;
    double gamma;

    MeanSpec(double a, double b) : alpha(a), beta(b), gamma(a * b) { check(); }
    MeanSpec(double a, double b, double g) : alpha(a), beta(b), gamma(g) { check(); }

private:
    void check() const {
        if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0))
            throw std::invalid_argument("MeanSpec: alpha, beta, gamma must be positive");
    }
};

/// Expected step matrix M = E(M_n).
Mat2 mean_matrix(const Policy& p, const MeanSpec& m);

/// Top eigenvalue of M in closed form (independent margins).
double mu(const Policy& p, double gamma);

/// General-dependence variant: gamma = E(eps*delta) enters the linear term,
/// alpha*beta the radicand cross term.
double mu_general(const Policy& p, double gamma, double alpha_beta);

/// Signs of the partial derivatives of mu; both equal sign(gamma - 1).
/// Requires lambda*theta != 0 and theta != 1.
std::pair<int, int> mu_gradient_signs(const Policy& p, double gamma);

/// Closed-form derivative d mu / d lambda (the same formula with the roles
/// of lambda and theta swapped gives d mu / d theta).
double mu_dlambda(const Policy& p, double gamma);

/// n iterates of the mean dynamics, (U_k, V_k) for k = 0..n.
std::vector<Vec2> mean_trajectory(const Policy& p, const MeanSpec& m, double u0, double v0,
                                  long n);

enum class MeanMonotonicity { u_up_v_down, u_down_v_up, constant };

struct GammaOneLimits {
    double u_limit;
    double v_limit;
    MeanMonotonicity monotonicity;
};

/// Limits and monotonicity classification when gamma = 1 (beta = 1/alpha).
GammaOneLimits gamma_one_limits(const Policy& p, const MeanSpec& m, double u0, double v0);

/// First-order expansion of mu in xi = gamma - 1.
double mu_first_order(const Policy& p, double xi);

} // namespace collector
