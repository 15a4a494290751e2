#pragma once

#include "collector/dynamics.hpp"
#include "collector/env.hpp"

#include <optional>
#include <string>
#include <vector>

namespace collector {

enum class Method { direct, boundary, cf, ratio, transfer, gig, bound };

std::string method_name(Method m);

enum class CertKind { none, stat_stderr, analytic };

/// A nu estimate: value (nats per period), how it was produced, how many
/// iterations/samples went in, and an error certificate.
struct LyapEstimate {
    double value = 0.0;
    Method method = Method::direct;
    long iterations = 0;
    CertKind cert_kind = CertKind::none;
    double cert = 0.0;
    bool converged = true;
    std::uint64_t seed = 0;
};

// ---- direct trajectory estimator -------------------------------------------

struct DirectOptions {
    double rel_tol = 1e-5;   // stopping rule |nu_n - nu_{n-1}| / |nu_n| < rel_tol
    long max_iter = 4000000; // per replication
    long min_iter = 1000;    // floor before the rule is consulted
    int replications = 30;   // independent replications for the stderr
    std::uint64_t stream_id = 101;
    double x0 = 1.0, y0 = 1.0;
};

/// Running nu_k = (1/k) ln ||state_k|| with periodic renormalization.
/// The stopping rule fixes the horizon on the first replication; the value
/// is the replication mean and the certificate its standard error.
LyapEstimate nu_direct(const Policy& p, const EnvStream& stream, const DirectOptions& opt = {});

// ---- boundary closed forms --------------------------------------------------

/// Exact/quadrature boundary values: 0 on lambda=0 or theta=0;
/// E ln(1-lambda+lambda*gamma_0) on theta=1; the zeta analogue on lambda=1.
/// Finite support and gamma margins are evaluated without sampling; other
/// streams use Monte Carlo with mc_budget draws.
LyapEstimate nu_boundary(const Policy& p, const EnvStream& stream, long mc_budget = 400000);

// ---- continued fractions -----------------------------------------------------

/// Constants of the geometric bias certificate for E ln u_n - nu.
struct CertCF {
    double C0 = 0.0;
    double h0 = 1.0;
    std::optional<double> h; // tighter i.i.d. rate when atom moments are known
    double bias_bound = 0.0; // C0 * rate^{n+1} / (1 - rate)
};

/// Certificate constants from the support bound C (Assumption-style);
/// atoms, when given, supply the i.i.d. rate h.
CertCF cf_certificate(const Policy& p, double C, int depth,
                      const std::vector<Atom>* atoms = nullptr);

struct CfOptions {
    int depth = 150;
    long replications = 200000;
    std::uint64_t stream_id = 211;
};

struct CfEstimate {
    LyapEstimate est; // value = sample mean of ln u_depth, cert = stderr
    CertCF cert;      // one-sided analytic bias bound (E ln u_n - nu > 0)
};

/// Monte Carlo of the monotone continued-fraction estimator u_n (X side).
CfEstimate nu_cf(const Policy& p, const EnvStream& stream, const CfOptions& opt = {});

/// Y-side estimator v_n; same contract.
CfEstimate nu_cf_v(const Policy& p, const EnvStream& stream, const CfOptions& opt = {});

/// One sampled path of u_0..u_depth from the stream (for monotonicity checks).
std::vector<double> cf_path(const Policy& p, EnvStream& stream, int depth);

// ---- projective transfer operator -------------------------------------------

/// Birkhoff contraction coefficient of a strictly positive 2x2 matrix.
double birkhoff_tau(const Mat2& A);

struct TransferOptions {
    int n_iter = 20;
    double rel_tol = 0.0; // if > 0, stop once the rule fires (after min_iter)
    int min_iter = 8;
    int grid_points = 4096;
    std::size_t exact_cap = std::size_t{1} << 20;
};

struct TransferEstimate {
    LyapEstimate est;             // value = nu_n at xbar=(1,1); cert = analytic + interpolation fold
    double theta = 0.0;           // average Birkhoff contraction
    double cert_base = 0.0;       // sum_l p_l h(xbar, A_l xbar)
    double interp_fold = 0.0;     // grid-mode interpolation error folded into cert
    bool exact_mode = false;
    std::vector<double> iterates; // nu_0 .. nu_n
};

/// Deterministic expectation iteration of the projective transfer operator
/// for a finite-support i.i.d. environment; all step matrices must be
/// strictly positive (interior policy). Exact branch enumeration up to
/// exact_cap leaves, otherwise piecewise-linear interpolation of T^k f on a
/// direction grid with the interpolation error folded into the certificate.
TransferEstimate nu_transfer(const Policy& p, const std::vector<Atom>& atoms,
                             const TransferOptions& opt = {});

/// The average contraction coefficient (er3) alone.
double transfer_theta(const Policy& p, const std::vector<Atom>& atoms);

/// The n-iteration a-priori error bound (er4) at xbar = (1,1).
double transfer_cert(const Policy& p, const std::vector<Atom>& atoms, int n);

// ---- Moebius / backward-ratio estimator --------------------------------------

/// (a11 x + a12) / (a21 x + a22); x = +infinity gives a11/a21.
double moebius_apply(const Mat2& A, double x);

/// Monte Carlo of E ln(1-lambda+lambda*theta*gamma_0 + theta*delta_0 / T(inf))
/// with T the backward product M_{-1}...M_{-(depth+1)}.
LyapEstimate nu_via_ratio(const Policy& p, const EnvStream& stream, int depth = 60,
                          long replications = 200000, std::uint64_t stream_id = 307);

// ---- GIG diagonal case --------------------------------------------------------

struct GigDiagEstimate {
    LyapEstimate mc;                  // Monte Carlo of E ln(1-l+l^2 eps*delta+l*delta*xi)
    std::optional<double> quadrature; // closed-form integral when r == s
};

/// nu(lambda, lambda) for gamma margins per GigSpec; lambda in (0,1).
GigDiagEstimate nu_gig_diagonal(const GigSpec& g, double lambda, long mc_budget = 2000000,
                                std::uint64_t seed = 424242);

} // namespace collector
