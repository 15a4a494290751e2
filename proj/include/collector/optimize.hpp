#pragma once

#include "collector/lyapunov.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace collector {

/// Distribution of a positive scalar return, with an exact expectation path
/// (atoms or gamma-product margins) and a sampled fallback.
struct ScalarDist {
    std::vector<std::pair<double, double>> atoms; // (value, probability)
    struct GammaProduct {
        double h1, a1, h2, a2;
    };
    std::optional<GammaProduct> gamma_product;
    std::vector<double> samples;

    bool exact() const { return !atoms.empty() || gamma_product.has_value(); }
    double expect(const std::function<double(double)>& f) const;

    /// Law of gamma_0 = eps_0*delta_0 for the given stream; finite and
    /// gamma-margin streams are exact, anything else is sampled.
    static ScalarDist gamma0_of(const EnvStream& stream, long mc_budget = 400000);
};

/// Kelly kernel: E ln(1 - lambda + lambda * r) for returns r.
double kelly_1d(const ScalarDist& returns, double lambda);

struct KellyMax {
    double lambda_star = 0.0;
    double value = 0.0;
};

/// Maximizer of kelly_1d over [0,1]: 0 when E(r) <= 1; 1 when E(1/r) <= 1;
/// otherwise the unique root of E(1/(1-l+l r)) = 1, bisected to 1e-10.
KellyMax kelly_maximize(const ScalarDist& returns);

/// Best boundary policy along theta = 1 for the stream's gamma_0 law.
KellyMax kelly_boundary_max(const EnvStream& stream, long mc_budget = 400000);

// ---- grid search --------------------------------------------------------------

enum class GridEstimator { direct, transfer };

struct GridOptions {
    int resolution = 50;       // interior cells per axis at i/(resolution+1)
    double rel_tol = 1e-3;     // per-cell stopping rule
    GridEstimator estimator = GridEstimator::direct;
    long max_iter = 200000;    // direct estimator per-cell cap
    int replications = 4;      // direct estimator replications per cell
    int transfer_max_iter = 60;
    std::uint64_t stream_id = 509;
    long boundary_budget = 400000;
};

struct GridCell {
    Policy policy;
    LyapEstimate est;
};

enum class KellyDecision { kelly_effect, inconclusive };

struct PolicyGrid {
    int resolution = 0;
    std::vector<GridCell> cells; // row-major: lambda index outer, theta inner
    Policy argmax{0.5, 0.5};
    double argmax_value = 0.0;
    Policy boundary_argmax{0.0, 1.0};
    double boundary_value = 0.0;
};

/// Evaluate the chosen estimator on the interior grid, fill the boundary
/// maximum from the closed forms, and return the argmax (ties broken toward
/// the smallest lambda, then smallest theta).
PolicyGrid grid_search(const EnvStream& stream, const GridOptions& opt = {});

struct KellyEffectResult {
    KellyDecision decision = KellyDecision::inconclusive;
    double margin = 0.0;       // interior value - certificate - boundary value
    LyapEstimate interior;     // certified re-estimate at the grid argmax
    double boundary_value = 0.0;
};

/// Certified interior-vs-boundary comparison: the grid argmax is re-estimated
/// with the transfer operator (finite support) or by cross-method agreement
/// (direct + cf combined), then compared against the boundary maximum.
KellyEffectResult kelly_effect_test(const PolicyGrid& grid, const EnvStream& stream,
                                    long mc_budget = 400000);

enum class Regime { subcritical, critical, supercritical };

struct RegimeReport {
    Regime tag = Regime::critical;
    std::string notes;
};

/// Phase classification by sign(gamma - 1), with the covariance caveat for
/// the subcritical guarantee and the boundary-maximizer type in the notes.
RegimeReport classify_regime(const EnvMoments& m);

} // namespace collector
