#include "collector/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace collector {

namespace {
constexpr int kRenormEvery = 64;
}

Mat2 step_matrix(const Policy& p, const EnvPair& e) {
    const double l = p.lambda, t = p.theta;
    return {1.0 - l + l * t * e.epsilon * e.delta, t * e.delta,
            l * (1.0 - t) * e.epsilon, 1.0 - t};
}

std::pair<Mat2, Mat2> factor_matrices(const Policy& p, const EnvPair& e) {
    const Mat2 sell{p.theta * e.delta, 1.0, 1.0 - p.theta, 0.0};
    const Mat2 buy{p.lambda * e.epsilon, 1.0, 1.0 - p.lambda, 0.0};
    return {sell, buy};
}

double LogTrajectory::log_norm_growth() const {
    return log_offset + std::log(max_norm(final_normalized)) - log_initial_norm;
}

namespace {

LogTrajectory run(const Policy& p, EnvStream& stream, const CollectorState& s0, long n,
                  bool dual) {
    if (n < 1) throw std::invalid_argument("iterate: need n >= 1");
    if (dual && p.theta == 1.0)
        throw std::invalid_argument("dual_iterate: theta = 1 is excluded");

    LogTrajectory traj;
    traj.dlog_x.reserve(static_cast<std::size_t>(n));
    traj.dlog_y.reserve(static_cast<std::size_t>(n));

    Vec2 s;
    if (dual) {
        // tilde initial state: X~_0 = (1-lambda) X_0, Y~_0 = Y_0 + lambda e_0 X_0
        const EnvPair first = stream.next();
        s = {(1.0 - p.lambda) * s0.x, s0.y + p.lambda * first.epsilon * s0.x};
    } else {
        s = {s0.x, s0.y};
    }
    // initial normalization
    traj.log_initial_norm = std::log(max_norm(s));
    traj.log_offset = traj.log_initial_norm;
    s = {s.x / max_norm(s), s.y / max_norm(s)};

    const double l = p.lambda, t = p.theta;
    for (long k = 0; k < n; ++k) {
        Vec2 nxt;
        if (dual) {
            // uses (delta_k, epsilon_{k+1}); the stream is one draw ahead
            const double dk = stream.current().delta;
            const EnvPair np = stream.next();
            const double pot = s.x + t * dk * s.y; // here s = (X~, Y~)
            nxt.x = (1.0 - l) * pot;
            nxt.y = (1.0 - t) * s.y + l * pot * np.epsilon;
        } else {
            const EnvPair e = stream.next();
            nxt = step_matrix(p, e).apply(s);
        }
        traj.dlog_x.push_back(std::log(nxt.x) - std::log(s.x));
        traj.dlog_y.push_back(std::log(nxt.y) - std::log(s.y));
        s = nxt;
        const double norm = max_norm(s);
        if (norm == 0.0)
            throw std::runtime_error("iterate: state collapsed to (0,0)");
        if ((k + 1) % kRenormEvery == 0) {
            traj.log_offset += std::log(norm);
            s = {s.x / norm, s.y / norm};
        }
    }
    traj.final_normalized = s;
    return traj;
}

} // namespace

LogTrajectory iterate(const Policy& p, EnvStream& stream, const CollectorState& s0, long n) {
    return run(p, stream, s0, n, false);
}

LogTrajectory dual_iterate(const Policy& p, EnvStream& stream, const CollectorState& s0, long n) {
    return run(p, stream, s0, n, true);
}

std::pair<double, double> ar_coefficients(const Policy& p, double gamma_n, double d_n) {
    const double l = p.lambda, t = p.theta;
    return {1.0 - l + l * t * gamma_n + (1.0 - t) * d_n,
            -(1.0 - l) * (1.0 - t) * d_n};
}

std::pair<double, double> ar_coefficients_y(const Policy& p, double zeta_n, double e_n) {
    if (p.theta == 1.0)
        throw std::invalid_argument("ar_coefficients_y: theta = 1 is excluded (Y collapses)");
    const double l = p.lambda, t = p.theta;
    return {1.0 - t + l * t * zeta_n + (1.0 - l) * e_n,
            -(1.0 - l) * (1.0 - t) * e_n};
}

} // namespace collector
