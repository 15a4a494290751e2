#include "collector/optimize.hpp"

#include "collector/parallel.hpp"
#include "collector/quad.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace collector {

double ScalarDist::expect(const std::function<double(double)>& f) const {
    if (!atoms.empty()) {
        double acc = 0.0;
        for (const auto& [v, p] : atoms) acc += p * f(v);
        return acc;
    }
    if (gamma_product) {
        const auto& g = *gamma_product;
        return gamma_product_expect(g.h1, g.a1, g.h2, g.a2, f);
    }
    if (samples.empty()) throw std::logic_error("ScalarDist: empty distribution");
    double acc = 0.0;
    for (double v : samples) acc += f(v);
    return acc / static_cast<double>(samples.size());
}

ScalarDist ScalarDist::gamma0_of(const EnvStream& stream, long mc_budget) {
    ScalarDist d;
    if (const auto* at = stream.atoms()) {
        for (const auto& a : *at) {
            const double v = a.pair.epsilon * a.pair.delta;
            bool merged = false;
            for (auto& e : d.atoms)
                if (e.first == v) {
                    e.second += a.prob;
                    merged = true;
                    break;
                }
            if (!merged) d.atoms.emplace_back(v, a.prob);
        }
        return d;
    }
    if (const auto* gg = dynamic_cast<const GammaGigStream*>(&stream)) {
        const GigSpec& g = gg->spec();
        d.gamma_product = GammaProduct{g.shape_h, 2.0 / g.rate_r, g.shape_h, 2.0 / g.rate_s};
        return d;
    }
    if (mc_budget <= 0) throw std::invalid_argument("ScalarDist: Monte Carlo budget required");
    auto s = stream.replay();
    d.samples.resize(static_cast<std::size_t>(mc_budget));
    for (long i = 0; i < mc_budget; ++i) {
        const EnvPair e = s->next();
        d.samples[static_cast<std::size_t>(i)] = e.epsilon * e.delta;
    }
    return d;
}

double kelly_1d(const ScalarDist& returns, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("kelly_1d: lambda must lie in [0,1]");
    if (lambda == 0.0) return 0.0;
    return returns.expect(
        [lambda](double r) { return std::log(1.0 - lambda + lambda * r); });
}

KellyMax kelly_maximize(const ScalarDist& returns) {
    const double mean = returns.expect([](double r) { return r; });
    if (mean <= 1.0) return {0.0, 0.0};
    const double mean_inv = returns.expect([](double r) { return 1.0 / r; });
    if (mean_inv <= 1.0) return {1.0, kelly_1d(returns, 1.0)};
    // FOC: E(1/(1-l+l r)) = 1; the expectation is increasing in l here
    auto foc = [&](double l) {
        return returns.expect([l](double r) { return 1.0 / (1.0 - l + l * r); }) - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (foc(mid) > 0.0 ? hi : lo) = mid;
    }
    const double lstar = 0.5 * (lo + hi);
    return {lstar, kelly_1d(returns, lstar)};
}

KellyMax kelly_boundary_max(const EnvStream& stream, long mc_budget) {
    return kelly_maximize(ScalarDist::gamma0_of(stream, mc_budget));
}

// ---- grid search ----------------------------------------------------------------

PolicyGrid grid_search(const EnvStream& stream, const GridOptions& opt) {
    if (opt.resolution < 2) throw std::invalid_argument("grid_search: resolution must be >= 2");
    if (opt.estimator == GridEstimator::transfer && !stream.atoms())
        throw std::invalid_argument("grid_search: transfer estimator needs finite support");

    PolicyGrid grid;
    grid.resolution = opt.resolution;
    const int R = opt.resolution;
    grid.cells.resize(static_cast<std::size_t>(R) * R,
                      GridCell{Policy{0.5, 0.5}, LyapEstimate{}});

    parallel_for(grid.cells.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / R; // lambda index
        const int j = static_cast<int>(idx) % R; // theta index
        const Policy cell{(i + 1) / static_cast<double>(R + 1),
                          (j + 1) / static_cast<double>(R + 1)};
        LyapEstimate est;
        if (opt.estimator == GridEstimator::transfer) {
            TransferOptions topt;
            topt.n_iter = opt.transfer_max_iter;
            topt.rel_tol = opt.rel_tol;
            est = nu_transfer(cell, *stream.atoms(), topt).est;
        } else {
            DirectOptions dopt;
            dopt.rel_tol = opt.rel_tol;
            dopt.max_iter = opt.max_iter;
            dopt.replications = opt.replications;
            dopt.stream_id = derive_seed(opt.stream_id, idx);
            est = nu_direct(cell, stream, dopt);
        }
        grid.cells[idx] = GridCell{cell, est};
    }, 0);

    // deterministic reducer; ties break toward smaller lambda then theta,
    // which is the scan order
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : grid.cells)
        if (c.est.value > best) {
            best = c.est.value;
            grid.argmax = c.policy;
            grid.argmax_value = c.est.value;
        }

    const KellyMax spec_edge = kelly_boundary_max(stream, opt.boundary_budget);
    const auto dual = dual_stream(stream);
    const KellyMax ecc_edge = kelly_boundary_max(*dual, opt.boundary_budget);
    // lambda=0 / theta=0 edges sit at exactly zero
    if (spec_edge.value >= ecc_edge.value && spec_edge.value >= 0.0) {
        grid.boundary_argmax = Policy{spec_edge.lambda_star, 1.0};
        grid.boundary_value = spec_edge.value;
    } else if (ecc_edge.value >= 0.0) {
        grid.boundary_argmax = Policy{1.0, ecc_edge.lambda_star};
        grid.boundary_value = ecc_edge.value;
    } else {
        grid.boundary_argmax = Policy{0.0, 1.0};
        grid.boundary_value = 0.0;
    }
    return grid;
}

KellyEffectResult kelly_effect_test(const PolicyGrid& grid, const EnvStream& stream,
                                    long mc_budget) {
    KellyEffectResult out;
    out.boundary_value = grid.boundary_value;

    if (stream.atoms()) {
        TransferOptions topt;
        topt.n_iter = 25;
        const TransferEstimate te = nu_transfer(grid.argmax, *stream.atoms(), topt);
        out.interior = te.est;
    } else {
        // dual-method agreement: direct and cf, combined into one certificate
        DirectOptions dopt;
        dopt.rel_tol = 1e-5;
        const LyapEstimate d = nu_direct(grid.argmax, stream, dopt);
        out.interior = d;
        if (std::isfinite(stream.bound_C())) {
            const CfEstimate c = nu_cf(grid.argmax, stream);
            out.interior.value = 0.5 * (d.value + c.est.value);
            out.interior.cert = std::fabs(d.value - c.est.value) + 3.0 * (d.cert + c.est.cert) +
                                c.cert.bias_bound;
            out.interior.cert_kind = CertKind::analytic;
        } else {
            out.interior.cert = 3.0 * d.cert;
        }
        (void)mc_budget;
    }

    out.margin = out.interior.value - out.interior.cert - grid.boundary_value;
    out.decision = out.margin > 0.0 ? KellyDecision::kelly_effect : KellyDecision::inconclusive;
    return out;
}

RegimeReport classify_regime(const EnvMoments& m) {
    RegimeReport out;
    std::ostringstream notes;
    if (std::fabs(m.gamma - 1.0) <= 1e-12) {
        out.tag = Regime::critical;
        notes << "gamma = 1: mean field is neutral (mu = 1 for all policies)";
    } else if (m.gamma < 1.0) {
        out.tag = Regime::subcritical;
        notes << "gamma = " << m.gamma << " < 1";
        if (m.cov_eps_delta >= 0.0)
            notes << "; cov >= 0, so nu <= 0 everywhere and lambda* = theta* = 0";
        else
            notes << "; cov < 0, the nu <= 0 guarantee does not apply";
    } else {
        out.tag = Regime::supercritical;
        notes << "gamma = " << m.gamma << " > 1; boundary maximizer is "
              << (m.mean_inv_gamma > 1.0 ? "interior in lambda (E(1/gamma) > 1)"
                                         : "the corner lambda = 1 (E(1/gamma) <= 1)");
    }
    out.notes = notes.str();
    return out;
}

} // namespace collector
