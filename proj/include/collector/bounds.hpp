#pragma once

#include "collector/dynamics.hpp"
#include "collector/env.hpp"

namespace collector {

/// One analytic bound evaluated for a concrete policy/stream: exact atom
/// enumeration (se = 0) for finite-support i.i.d. streams, Monte Carlo with
/// batch-means standard error otherwise.
struct BoundValue {
    double value = 0.0;
    double se = 0.0;
    bool exact = false;
};

/// The autoregressive sandwich plus the classical spectral/ergodic bounds.
/// upper_nam3 stores HALF of the paper's two-step display (the derivation
/// controls (1/2) lim (1/n) sum ln(X_{n+1}/X_{n-1}), reported here as an
/// upper bound for nu; the source writes the display as a bound on "nu^2").
struct BoundsReport {
    BoundValue lower_art;
    BoundValue upper_nam1;
    BoundValue upper_nam3;
    BoundValue upper_ergodic;
    BoundValue upper_logplus;
};

BoundValue bound_art_lower(const Policy& p, const EnvStream& stream, long mc_budget = 200000);
BoundValue bound_nam1_upper(const Policy& p, const EnvStream& stream, long mc_budget = 200000);
BoundValue bound_nam3_upper(const Policy& p, const EnvStream& stream, long mc_budget = 200000);

/// E ln mu_0 with mu_0 the per-step Perron root; valid on the boundary too.
BoundValue bound_ergodic_upper(const Policy& p, const EnvStream& stream, long mc_budget = 200000);

/// Policy-free bound E max(0, ln gamma_0).
BoundValue bound_logplus_upper(const EnvStream& stream, long mc_budget = 200000);

/// Near-speculator lower bound E ln(1-lambda+(1-xi)*lambda*gamma_0) at
/// theta = 1-xi.
BoundValue bound_nup_lower(const Policy& p, const EnvStream& stream, long mc_budget = 200000);

/// All primal bounds at once.
BoundsReport bounds_primal(const Policy& p, const EnvStream& stream, long mc_budget = 200000);

/// The zeta/e analogues: primal bounds evaluated on the swapped-and-shifted
/// environment at the swapped policy (they bound the same nu).
BoundsReport bounds_dual(const Policy& p, const EnvStream& stream, long mc_budget = 200000);

} // namespace collector
