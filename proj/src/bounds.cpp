#include "collector/bounds.hpp"

#include "collector/meanfield.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace collector {

namespace {

// Integrands take three consecutive pairs (n-2, n-1, n).
using Window3 = std::function<double(const EnvPair&, const EnvPair&, const EnvPair&)>;

BoundValue expect_window3(const EnvStream& stream, const Window3& f, long mc_budget) {
    BoundValue out;
    if (const auto* atoms = stream.atoms()) {
        out.exact = true;
        double acc = 0.0;
        for (const auto& a : *atoms)
            for (const auto& b : *atoms)
                for (const auto& c : *atoms)
                    acc += a.prob * b.prob * c.prob * f(a.pair, b.pair, c.pair);
        out.value = acc;
        return out;
    }
    if (mc_budget <= 0) throw std::invalid_argument("bounds: Monte Carlo budget required");
    auto s = stream.replay();
    s->next();
    s->next(); // warm the 3-window
    const int batches = 32;
    const long per = std::max<long>(mc_budget / batches, 1);
    std::vector<double> bm(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (long i = 0; i < per; ++i) {
            s->next();
            acc += f(s->lag(2), s->lag(1), s->current());
        }
        bm[static_cast<std::size_t>(b)] = acc / static_cast<double>(per);
    }
    double mean = 0.0;
    for (double v : bm) mean += v;
    mean /= batches;
    double var = 0.0;
    for (double v : bm) var += (v - mean) * (v - mean);
    out.value = mean;
    out.se = std::sqrt(var / (batches - 1.0) / batches);
    return out;
}

void require_interior(const Policy& p, const char* who) {
    if (!p.interior()) throw std::invalid_argument(std::string(who) + ": interior policy required");
}

} // namespace

BoundValue bound_art_lower(const Policy& p, const EnvStream& stream, long mc_budget) {
    require_interior(p, "bound_art_lower");
    const double l = p.lambda, t = p.theta;
    return expect_window3(
        stream,
        [l, t](const EnvPair&, const EnvPair& pm1, const EnvPair& pn) {
            const double gn = pn.epsilon * pn.delta;
            const double gm1 = pm1.epsilon * pm1.delta;
            const double dn = pn.delta / pm1.delta;
            return std::log(1.0 - l + l * t * gn +
                            (1.0 - t) * dn * l * t * gm1 / (1.0 - l + l * t * gm1));
        },
        mc_budget);
}

BoundValue bound_nam1_upper(const Policy& p, const EnvStream& stream, long mc_budget) {
    require_interior(p, "bound_nam1_upper");
    const double l = p.lambda, t = p.theta;
    return expect_window3(
        stream,
        [l, t](const EnvPair& pm2, const EnvPair& pm1, const EnvPair& pn) {
            const double gn = pn.epsilon * pn.delta;
            const double zm1 = pm1.epsilon * pm2.delta; // zeta_{n-1}
            const double dn = pn.delta / pm1.delta;
            const double dm1 = pm1.delta / pm2.delta;
            const double num = l * t * zm1 + 1.0 - t;
            const double den = (1.0 - l) / dm1 + l * t * zm1 + 1.0 - t;
            return std::log(1.0 - l + l * t * gn + (1.0 - t) * dn * num / den);
        },
        mc_budget);
}

BoundValue bound_nam3_upper(const Policy& p, const EnvStream& stream, long mc_budget) {
    require_interior(p, "bound_nam3_upper");
    const double l = p.lambda, t = p.theta;
    return expect_window3(
        stream,
        [l, t](const EnvPair& pm2, const EnvPair& pm1, const EnvPair& pn) {
            const double gn = pn.epsilon * pn.delta;
            const double gm1 = pm1.epsilon * pm1.delta;
            const double dn = pn.delta / pm1.delta;
            const double dm1 = pm1.delta / pm2.delta;
            const double two_step = (1.0 - l + l * t * gn + (1.0 - t) * dn) *
                                        (1.0 - l + l * t * gm1 + (1.0 - t) * dm1) -
                                    (1.0 - l) * (1.0 - t) * dn;
            return 0.5 * std::log(two_step);
        },
        mc_budget);
}

BoundValue bound_ergodic_upper(const Policy& p, const EnvStream& stream, long mc_budget) {
    const double l = p.lambda, t = p.theta;
    return expect_window3(
        stream,
        [l, t](const EnvPair&, const EnvPair&, const EnvPair& pn) {
            const double g = pn.epsilon * pn.delta;
            const double s = t - l + l * t * g;
            const double mu0 = 0.5 * (2.0 - l - t + g * l * t +
                                      std::sqrt(s * s + 4.0 * l * t * (1.0 - t) * g));
            return std::log(mu0);
        },
        mc_budget);
}

BoundValue bound_logplus_upper(const EnvStream& stream, long mc_budget) {
    return expect_window3(
        stream,
        [](const EnvPair&, const EnvPair&, const EnvPair& pn) {
            return std::fmax(0.0, std::log(pn.epsilon * pn.delta));
        },
        mc_budget);
}

BoundValue bound_nup_lower(const Policy& p, const EnvStream& stream, long mc_budget) {
    if (!(p.lambda > 0.0 && p.lambda < 1.0))
        throw std::invalid_argument("bound_nup_lower: lambda in (0,1) required");
    const double l = p.lambda, xi = 1.0 - p.theta;
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("bound_nup_lower: bad xi");
    return expect_window3(
        stream,
        [l, xi](const EnvPair&, const EnvPair&, const EnvPair& pn) {
            return std::log(1.0 - l + (1.0 - xi) * l * pn.epsilon * pn.delta);
        },
        mc_budget);
}

BoundsReport bounds_primal(const Policy& p, const EnvStream& stream, long mc_budget) {
    BoundsReport r;
    r.lower_art = bound_art_lower(p, stream, mc_budget);
    r.upper_nam1 = bound_nam1_upper(p, stream, mc_budget);
    r.upper_nam3 = bound_nam3_upper(p, stream, mc_budget);
    r.upper_ergodic = bound_ergodic_upper(p, stream, mc_budget);
    r.upper_logplus = bound_logplus_upper(stream, mc_budget);
    return r;
}

BoundsReport bounds_dual(const Policy& p, const EnvStream& stream, long mc_budget) {
    require_interior(p, "bounds_dual");
    const auto dual = dual_stream(stream);
    const Policy swapped{p.theta, p.lambda};
    return bounds_primal(swapped, *dual, mc_budget);
}

} // namespace collector
