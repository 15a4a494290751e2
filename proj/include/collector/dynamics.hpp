#pragma once

#include "collector/env.hpp"
#include "collector/mat2.hpp"

#include <utility>
#include <vector>

namespace collector {

/// Fixed policy: fraction of capital invested (lambda) and fraction of the
/// collection sold (theta) each period.
struct Policy {
    double lambda;
    double theta;

    Policy(double l, double t) : lambda(l), theta(t) {
        if (!(l >= 0.0 && l <= 1.0 && t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("Policy: lambda, theta must lie in [0,1]");
        if (!(l + t > 0.0))
            throw std::invalid_argument("Policy: lambda + theta must be positive");
    }

    bool interior() const {
        return lambda > 0.0 && lambda < 1.0 && theta > 0.0 && theta < 1.0;
    }
};

/// Macrostate (capital, collection value). Nonnegative, not both zero.
struct CollectorState {
    double x;
    double y;

    CollectorState(double x_, double y_) : x(x_), y(y_) {
        if (!(x >= 0.0 && y >= 0.0) || (x == 0.0 && y == 0.0))
            throw std::invalid_argument("CollectorState: need x,y >= 0, not both zero");
    }
};

/// One-step matrix M_n for (policy, pair).
Mat2 step_matrix(const Policy& p, const EnvPair& e);

/// Sell/buy factors with sell*buy == step_matrix.
std::pair<Mat2, Mat2> factor_matrices(const Policy& p, const EnvPair& e);

/// Trajectory bookkeeping in log scale. The state is rescaled to unit
/// max-norm every 64 steps; log_offset accumulates the rescalings so that
/// exp(log_offset) * final_normalized recovers the unnormalized state.
struct LogTrajectory {
    std::vector<double> dlog_x; // ln X_{k+1} - ln X_k (+-inf on degenerate first steps)
    std::vector<double> dlog_y;
    double log_offset = 0.0;       // exp(log_offset) * final_normalized = state_n
    double log_initial_norm = 0.0; // ln ||state_0||
    Vec2 final_normalized{};

    double log_norm_growth() const; // ln ||state_n|| - ln ||state_0||, max norm
};

/// Iterate the primal system n steps, consuming the stream.
/// Throws if the state collapses to exactly (0,0) (theta = 1 with X = 0).
LogTrajectory iterate(const Policy& p, EnvStream& stream, const CollectorState& s0, long n);

/// Iterate the dual (Y,X) system n steps (sell first, then buy with the
/// next period's rate). Requires theta != 1.
LogTrajectory dual_iterate(const Policy& p, EnvStream& stream, const CollectorState& s0, long n);

/// Coefficients of the second-order recursion X_{n+1} = p_n X_n + q_n X_{n-1}.
std::pair<double, double> ar_coefficients(const Policy& p, double gamma_n, double d_n);

/// Y-side coefficients r_n, s_n (requires theta != 1).
std::pair<double, double> ar_coefficients_y(const Policy& p, double zeta_n, double e_n);

} // namespace collector
