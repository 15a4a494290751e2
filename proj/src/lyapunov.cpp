#include "collector/lyapunov.hpp"

#include "collector/parallel.hpp"
#include "collector/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace collector {

std::string method_name(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::boundary: return "boundary";
        case Method::cf: return "cf";
        case Method::ratio: return "ratio";
        case Method::transfer: return "transfer";
        case Method::gig: return "gig";
        case Method::bound: return "bound";
    }
    return "?";
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s2 = 0.0;
    for (double x : v) s2 += (x - mean) * (x - mean);
    return std::sqrt(s2 / (static_cast<double>(v.size()) - 1.0) /
                     static_cast<double>(v.size()));
}

} // namespace

// ---- direct ---------------------------------------------------------------

LyapEstimate nu_direct(const Policy& p, const EnvStream& stream, const DirectOptions& opt) {
    if (!p.interior())
        throw std::invalid_argument("nu_direct: interior policy required (use nu_boundary)");
    if (!(opt.rel_tol > 0.0)) throw std::invalid_argument("nu_direct: rel_tol must be positive");

    // horizon from the stopping rule on replication 0
    long horizon = opt.max_iter;
    bool converged = false;
    {
        auto s = stream.clone(derive_seed(opt.stream_id, 0));
        Vec2 v{opt.x0, opt.y0};
        double off = 0.0;
        double prev_nu = 0.0;
        for (long k = 1; k <= opt.max_iter; ++k) {
            v = step_matrix(p, s->next()).apply(v);
            const double norm = max_norm(v);
            if (k % 64 == 0 || norm > 1e100) {
                off += std::log(norm);
                v = {v.x / norm, v.y / norm};
            }
            const double nu_k = (off + std::log(max_norm(v))) / static_cast<double>(k);
            if (k >= opt.min_iter && std::fabs(nu_k - prev_nu) < opt.rel_tol * std::fabs(nu_k)) {
                horizon = k;
                converged = true;
                break;
            }
            prev_nu = nu_k;
        }
    }

    std::vector<double> reps(static_cast<std::size_t>(opt.replications));
    parallel_for(reps.size(), [&](std::size_t r) {
        auto s = stream.clone(derive_seed(opt.stream_id, r));
        Vec2 v{opt.x0, opt.y0};
        double off = 0.0;
        for (long k = 1; k <= horizon; ++k) {
            v = step_matrix(p, s->next()).apply(v);
            if (k % 64 == 0) {
                const double norm = max_norm(v);
                off += std::log(norm);
                v = {v.x / norm, v.y / norm};
            }
        }
        reps[r] = (off + std::log(max_norm(v))) / static_cast<double>(horizon);
    });

    LyapEstimate est;
    est.method = Method::direct;
    est.value = mean_of(reps);
    est.cert_kind = CertKind::stat_stderr;
    est.cert = stderr_of(reps, est.value);
    est.iterations = horizon;
    est.converged = converged;
    est.seed = stream.seed();
    return est;
}

// ---- boundary --------------------------------------------------------------

namespace {

// E ln(1 - lam + lam * gamma_0) for the stream's gamma_0 = eps_0*delta_0 law.
double boundary_speculator(double lam, const EnvStream& stream, long mc_budget) {
    if (const auto* atoms = stream.atoms()) {
        double acc = 0.0;
        for (const auto& a : *atoms)
            acc += a.prob * std::log(1.0 - lam + lam * a.pair.epsilon * a.pair.delta);
        return acc;
    }
    if (const auto* gg = dynamic_cast<const GammaGigStream*>(&stream)) {
        const GigSpec& g = gg->spec();
        return gamma_product_expect(g.shape_h, 2.0 / g.rate_r, g.shape_h, 2.0 / g.rate_s,
                                    [lam](double x) { return std::log(1.0 - lam + lam * x); });
    }
    auto s = stream.replay();
    double acc = 0.0;
    for (long i = 0; i < mc_budget; ++i) {
        const EnvPair e = s->next();
        acc += std::log(1.0 - lam + lam * e.epsilon * e.delta);
    }
    return acc / static_cast<double>(mc_budget);
}

} // namespace

LyapEstimate nu_boundary(const Policy& p, const EnvStream& stream, long mc_budget) {
    const bool on_boundary = p.lambda == 0.0 || p.lambda == 1.0 || p.theta == 0.0 || p.theta == 1.0;
    if (!on_boundary) throw std::invalid_argument("nu_boundary: policy must touch the boundary");
    LyapEstimate est;
    est.method = Method::boundary;
    est.iterations = 1;
    est.cert_kind = stream.atoms() ? CertKind::none : CertKind::stat_stderr;
    est.seed = stream.seed();
    if (p.lambda == 0.0 || p.theta == 0.0) {
        est.value = 0.0; // saturating regimes
        est.cert_kind = CertKind::none;
        return est;
    }
    if (p.theta == 1.0) {
        est.value = boundary_speculator(p.lambda, stream, mc_budget);
        return est;
    }
    // lambda = 1 (eccentric): E ln(1-theta+theta*zeta_0); zeta_0 is gamma_0 of
    // the swapped-and-shifted environment.
    auto dual = dual_stream(stream);
    est.value = boundary_speculator(p.theta, *dual, mc_budget);
    return est;
}

// ---- continued fractions -----------------------------------------------------

CertCF cf_certificate(const Policy& p, double C, int depth, const std::vector<Atom>* atoms) {
    if (!(p.lambda * p.theta > 0.0))
        throw std::invalid_argument("cf_certificate: lambda*theta must be positive");
    if (!(C > 1.0)) throw std::invalid_argument("cf_certificate: C must exceed 1");
    const double l = p.lambda, t = p.theta;
    CertCF out;
    const double C2 = C * C;
    out.C0 = C2 * (1.0 - l + (1.0 - t + l * t) * C2) / (1.0 - l + l * t / C2);
    const double lo = l <= t ? (1.0 - l) / (1.0 - l + l * t / C2)
                             : (1.0 - t) / (1.0 - t + l * t / C2);
    out.h0 = lo * lo;
    if (atoms) {
        double acc = 0.0;
        for (const auto& a : *atoms) {
            const double g = a.pair.epsilon * a.pair.delta;
            const double r = l <= t ? (1.0 - l) / (1.0 - l + l * t * g)
                                    : (1.0 - t) / (1.0 - t + l * t * g);
            acc += a.prob * r * r;
        }
        out.h = acc;
    }
    const double rate = out.h ? *out.h : out.h0;
    out.bias_bound = out.C0 * std::pow(rate, depth + 1) / (1.0 - rate);
    return out;
}

namespace {

// u_m(0) = T_{P_0 P_1 ... P_m}(inf) with P_k = [[p_{-k}, q_{-k}], [1, 0]].
// Walking the product left to right turns newest-to-oldest coefficient pairs
// into all prefix values u_0..u_depth in one pass.
struct CfWalker {
    Mat2 M{1.0, 0.0, 0.0, 1.0};
    void push(double pk, double qk) {
        M = M * Mat2{pk, qk, 1.0, 0.0};
        const double norm = M.max_abs();
        M = M.scaled(1.0 / norm);
    }
    double value() const { return M.a11 / M.a21; }
};

// Draw depth+2 pairs and return ln u_depth (x_side) or ln v_depth.
double cf_sample(const Policy& p, EnvStream& s, int depth, bool x_side) {
    // pairs indexed newest first: we need (p_0, p_{-1}, ..., p_{-depth});
    // generate a stationary block and index it from the end.
    const int n = depth + 2;
    std::vector<EnvPair> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = s.next();
    CfWalker walk;
    for (int k = 0; k <= depth; ++k) {
        // coefficient at lag k uses pair index (n-1-k) and its predecessor
        const EnvPair& cur = w[static_cast<std::size_t>(n - 1 - k)];
        const EnvPair& prev = w[static_cast<std::size_t>(n - 2 - k)];
        double a, b;
        if (x_side) {
            const double dn = cur.delta / prev.delta;
            std::tie(a, b) = ar_coefficients(p, cur.epsilon * cur.delta, dn);
        } else {
            const double en = cur.epsilon / prev.epsilon;
            std::tie(a, b) = ar_coefficients_y(p, cur.epsilon * prev.delta, en);
        }
        walk.push(a, b);
    }
    return std::log(walk.value());
}

CfEstimate cf_impl(const Policy& p, const EnvStream& stream, const CfOptions& opt, bool x_side) {
    if (!p.interior()) throw std::invalid_argument("nu_cf: interior policy required");
    if (!std::isfinite(stream.bound_C()))
        throw std::invalid_argument("nu_cf: bounded-support stream required");

    const unsigned threads = std::thread::hardware_concurrency();
    const long per = (opt.replications + threads - 1) / threads;
    std::vector<double> sums(threads, 0.0), sums2(threads, 0.0);
    std::vector<long> counts(threads, 0);
    parallel_for(threads, [&](std::size_t tid) {
        auto s = stream.clone(derive_seed(opt.stream_id, tid));
        double acc = 0.0, acc2 = 0.0;
        long cnt = 0;
        for (long i = 0; i < per && (static_cast<long>(tid) * per + i) < opt.replications; ++i) {
            const double v = cf_sample(p, *s, opt.depth, x_side);
            acc += v;
            acc2 += v * v;
            ++cnt;
        }
        sums[tid] = acc;
        sums2[tid] = acc2;
        counts[tid] = cnt;
    });
    double sum = 0.0, sum2 = 0.0;
    long cnt = 0;
    for (unsigned t = 0; t < threads; ++t) {
        sum += sums[t];
        sum2 += sums2[t];
        cnt += counts[t];
    }
    const double mean = sum / static_cast<double>(cnt);
    const double var = std::fmax(sum2 / static_cast<double>(cnt) - mean * mean, 0.0);

    CfEstimate out;
    out.est.method = Method::cf;
    out.est.value = mean;
    out.est.cert_kind = CertKind::stat_stderr;
    out.est.cert = std::sqrt(var / static_cast<double>(cnt));
    out.est.iterations = opt.depth;
    out.est.seed = stream.seed();
    out.cert = cf_certificate(p, stream.bound_C(), opt.depth, stream.atoms());
    return out;
}

} // namespace

CfEstimate nu_cf(const Policy& p, const EnvStream& stream, const CfOptions& opt) {
    return cf_impl(p, stream, opt, true);
}

CfEstimate nu_cf_v(const Policy& p, const EnvStream& stream, const CfOptions& opt) {
    return cf_impl(p, stream, opt, false);
}

std::vector<double> cf_path(const Policy& p, EnvStream& stream, int depth) {
    // One realization: u_m for m = 0..depth along a single draw of
    // (p_0, q_0), (p_{-1}, q_{-1}), ... taken in stream order.
    stream.next();
    CfWalker walk;
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(depth) + 1);
    for (int m = 0; m <= depth; ++m) {
        const EnvPair cur = stream.next();
        const double dn = cur.delta / stream.lag(1).delta;
        auto [a, b] = ar_coefficients(p, cur.epsilon * cur.delta, dn);
        walk.push(a, b);
        path.push_back(walk.value());
    }
    return path;
}

// ---- transfer operator -------------------------------------------------------

double birkhoff_tau(const Mat2& A) {
    if (!(A.a11 > 0.0 && A.a12 > 0.0 && A.a21 > 0.0 && A.a22 > 0.0))
        throw std::domain_error("birkhoff_tau: strictly positive entries required");
    const double r1 = (A.a11 * A.a22) / (A.a12 * A.a21);
    const double psi = std::fmin(1.0, std::fmin(r1, 1.0 / r1));
    const double sq = std::sqrt(psi);
    return (1.0 - sq) / (1.0 + sq);
}

namespace {

struct TransferSetup {
    std::vector<Mat2> mats;
    std::vector<double> probs;
    double theta = 0.0;
    double cert_base = 0.0; // sum_l p_l h(xbar, A_l xbar), xbar = (1,1)
};

TransferSetup transfer_setup(const Policy& p, const std::vector<Atom>& atoms) {
    TransferSetup ts;
    for (const auto& a : atoms) {
        const Mat2 M = step_matrix(p, a.pair);
        if (!(M.a11 > 0.0 && M.a12 > 0.0 && M.a21 > 0.0 && M.a22 > 0.0))
            throw std::domain_error("nu_transfer: boundary policy gives nonpositive entries");
        ts.mats.push_back(M);
        ts.probs.push_back(a.prob);
        ts.theta += a.prob * birkhoff_tau(M);
        const Vec2 ax = M.apply({1.0, 1.0});
        ts.cert_base += a.prob * std::fabs(std::log(ax.x / ax.y));
    }
    return ts;
}

// smooth observable: F(u) = sum_j p_j * log(||A_j (1,u)||_2 / ||(1,u)||_2)
double observable(const TransferSetup& ts, double u) {
    double tot = 0.0;
    const double n2 = 1.0 + u * u;
    for (std::size_t j = 0; j < ts.mats.size(); ++j) {
        const Mat2& A = ts.mats[j];
        const double c1 = A.a11 + A.a12 * u;
        const double c2 = A.a21 + A.a22 * u;
        tot += ts.probs[j] * 0.5 * std::log((c1 * c1 + c2 * c2) / n2);
    }
    return tot;
}

double ratio_map(const Mat2& A, double u) {
    return (A.a21 + A.a22 * u) / (A.a11 + A.a12 * u);
}

} // namespace

double transfer_theta(const Policy& p, const std::vector<Atom>& atoms) {
    return transfer_setup(p, atoms).theta;
}

double transfer_cert(const Policy& p, const std::vector<Atom>& atoms, int n) {
    const TransferSetup ts = transfer_setup(p, atoms);
    return std::pow(ts.theta, n) / (1.0 - ts.theta) * ts.cert_base;
}

TransferEstimate nu_transfer(const Policy& p, const std::vector<Atom>& atoms,
                             const TransferOptions& opt) {
    if (atoms.empty()) throw std::invalid_argument("nu_transfer: finite support required");
    const TransferSetup ts = transfer_setup(p, atoms);
    const std::size_t b = ts.mats.size();

    TransferEstimate out;
    out.theta = ts.theta;
    out.cert_base = ts.cert_base;
    out.est.method = Method::transfer;
    out.est.cert_kind = CertKind::analytic;
    out.est.seed = 0;

    // exact branch enumeration feasible?
    double leaves = 1.0;
    bool exact = opt.rel_tol <= 0.0;
    for (int k = 0; k < opt.n_iter && exact; ++k) {
        leaves *= static_cast<double>(b);
        if (leaves > static_cast<double>(opt.exact_cap)) exact = false;
    }
    out.exact_mode = exact;

    int n_done = 0;
    bool fired = false;
    if (exact) {
        std::vector<double> us{1.0}, ws{1.0};
        out.iterates.push_back(observable(ts, 1.0));
        for (int n = 1; n <= opt.n_iter; ++n) {
            std::vector<double> nus(us.size() * b), nws(ws.size() * b);
            for (std::size_t j = 0; j < b; ++j)
                for (std::size_t i = 0; i < us.size(); ++i) {
                    nus[j * us.size() + i] = ratio_map(ts.mats[j], us[i]);
                    nws[j * ws.size() + i] = ts.probs[j] * ws[i];
                }
            us.swap(nus);
            ws.swap(nws);
            double acc = 0.0;
            for (std::size_t i = 0; i < us.size(); ++i) acc += ws[i] * observable(ts, us[i]);
            out.iterates.push_back(acc);
            n_done = n;
        }
    } else {
        // invariant interval of the ratio maps, plus the base point u0 = 1
        double lo = 1.0, hi = 1.0;
        for (const Mat2& A : ts.mats) {
            // fixed point of u -> (a21 + a22 u)/(a11 + a12 u)
            const double B = A.a11 - A.a22;
            const double fp = (-B + std::sqrt(B * B + 4.0 * A.a12 * A.a21)) / (2.0 * A.a12);
            lo = std::fmin(lo, fp);
            hi = std::fmax(hi, fp);
        }
        lo *= 0.95;
        hi *= 1.05;
        const int G = opt.grid_points;
        const double du = (hi - lo) / static_cast<double>(G - 1);

        std::vector<double> vals(static_cast<std::size_t>(G));
        for (int i = 0; i < G; ++i) vals[static_cast<std::size_t>(i)] = observable(ts, lo + du * i);

        // precompute, per map, the fractional grid position of each mapped node
        std::vector<std::vector<int>> idx(b, std::vector<int>(static_cast<std::size_t>(G)));
        std::vector<std::vector<double>> frac(b, std::vector<double>(static_cast<std::size_t>(G)));
        for (std::size_t j = 0; j < b; ++j)
            for (int i = 0; i < G; ++i) {
                const double pos = (ratio_map(ts.mats[j], lo + du * i) - lo) / du;
                int i0 = static_cast<int>(pos);
                i0 = std::clamp(i0, 0, G - 2);
                idx[j][static_cast<std::size_t>(i)] = i0;
                frac[j][static_cast<std::size_t>(i)] = pos - i0;
            }
        const double upos = (1.0 - lo) / du;
        const int ui = std::clamp(static_cast<int>(upos), 0, G - 2);
        const double uf = upos - ui;

        auto eval_u0 = [&](const std::vector<double>& v) {
            return v[static_cast<std::size_t>(ui)] * (1.0 - uf) +
                   v[static_cast<std::size_t>(ui) + 1] * uf;
        };

        double max_curv = 0.0; // max second difference / du^2, for the fold
        auto track_curv = [&](const std::vector<double>& v) {
            for (int i = 1; i + 1 < G; ++i) {
                const double c = std::fabs(v[static_cast<std::size_t>(i) - 1] -
                                           2.0 * v[static_cast<std::size_t>(i)] +
                                           v[static_cast<std::size_t>(i) + 1]) /
                                 (du * du);
                if (c > max_curv) max_curv = c;
            }
        };
        track_curv(vals);
        out.iterates.push_back(eval_u0(vals));

        std::vector<double> next(static_cast<std::size_t>(G));
        for (int n = 1; n <= opt.n_iter; ++n) {
            for (int i = 0; i < G; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < b; ++j) {
                    const int i0 = idx[j][static_cast<std::size_t>(i)];
                    const double f = frac[j][static_cast<std::size_t>(i)];
                    acc += ts.probs[j] * (vals[static_cast<std::size_t>(i0)] * (1.0 - f) +
                                          vals[static_cast<std::size_t>(i0) + 1] * f);
                }
                next[static_cast<std::size_t>(i)] = acc;
            }
            vals.swap(next);
            track_curv(vals);
            out.iterates.push_back(eval_u0(vals));
            n_done = n;
            if (opt.rel_tol > 0.0 && n >= opt.min_iter) {
                const double cur = out.iterates[static_cast<std::size_t>(n)];
                const double prev = out.iterates[static_cast<std::size_t>(n) - 1];
                if (std::fabs(cur - prev) < opt.rel_tol * std::fabs(cur)) {
                    fired = true;
                    break;
                }
            }
        }
        // PWL error per application <= du^2/8 * max|f''|; accumulated through
        // the contraction it stays below that / (1 - theta).
        out.interp_fold = du * du / 8.0 * max_curv / (1.0 - ts.theta);
    }

    out.est.value = out.iterates.back();
    out.est.iterations = n_done;
    out.est.converged = opt.rel_tol <= 0.0 || fired || exact;
    out.est.cert = std::pow(ts.theta, n_done) / (1.0 - ts.theta) * ts.cert_base + out.interp_fold;
    return out;
}

// ---- Moebius / ratio ---------------------------------------------------------

double moebius_apply(const Mat2& A, double x) {
    if (std::isinf(x)) return A.a11 / A.a21;
    return (A.a11 * x + A.a12) / (A.a21 * x + A.a22);
}

LyapEstimate nu_via_ratio(const Policy& p, const EnvStream& stream, int depth,
                          long replications, std::uint64_t stream_id) {
    if (!p.interior()) throw std::invalid_argument("nu_via_ratio: interior policy required");
    const unsigned threads = std::thread::hardware_concurrency();
    const long per = (replications + threads - 1) / threads;
    std::vector<double> sums(threads, 0.0), sums2(threads, 0.0);
    std::vector<long> counts(threads, 0);
    const double l = p.lambda, t = p.theta;
    parallel_for(threads, [&](std::size_t tid) {
        auto s = stream.clone(derive_seed(stream_id, tid));
        double acc = 0.0, acc2 = 0.0;
        long cnt = 0;
        for (long i = 0; i < per && (static_cast<long>(tid) * per + i) < replications; ++i) {
            const EnvPair head = s->next(); // (eps_0, delta_0)
            Mat2 W = step_matrix(p, s->next());
            for (int k = 1; k < depth; ++k) {
                W = W * step_matrix(p, s->next());
                if (k % 32 == 0) W = W.scaled(1.0 / W.max_abs());
            }
            const double ratio_yx = W.a21 / W.a11; // 1 / T(inf)
            const double v =
                std::log(1.0 - l + l * t * head.epsilon * head.delta + t * head.delta * ratio_yx);
            acc += v;
            acc2 += v * v;
            ++cnt;
        }
        sums[tid] = acc;
        sums2[tid] = acc2;
        counts[tid] = cnt;
    });
    double sum = 0.0, sum2 = 0.0;
    long cnt = 0;
    for (unsigned tt = 0; tt < threads; ++tt) {
        sum += sums[tt];
        sum2 += sums2[tt];
        cnt += counts[tt];
    }
    LyapEstimate est;
    est.method = Method::ratio;
    est.value = sum / static_cast<double>(cnt);
    est.cert_kind = CertKind::stat_stderr;
    est.cert = std::sqrt(
        std::fmax(sum2 / static_cast<double>(cnt) - est.value * est.value, 0.0) /
        static_cast<double>(cnt));
    est.iterations = depth;
    est.seed = stream.seed();
    return est;
}

// ---- GIG diagonal --------------------------------------------------------------

GigDiagEstimate nu_gig_diagonal(const GigSpec& g, double lambda, long mc_budget,
                                std::uint64_t seed) {
    g.validate();
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("nu_gig_diagonal: lambda must lie in (0,1)");

    GigDiagEstimate out;

    const double a = g.rate_r / lambda;
    const double b = g.rate_s * (1.0 - lambda) / lambda;

    const unsigned threads = std::thread::hardware_concurrency();
    const long per = (mc_budget + threads - 1) / threads;
    std::vector<double> sums(threads, 0.0), sums2(threads, 0.0);
    std::vector<long> counts(threads, 0);
    parallel_for(threads, [&](std::size_t tid) {
        std::mt19937_64 rng(derive_seed(seed, tid));
        double acc = 0.0, acc2 = 0.0;
        long cnt = 0;
        for (long i = 0; i < per && (static_cast<long>(tid) * per + i) < mc_budget; ++i) {
            const double eps = gamma_sample(g.shape_h, 2.0 / g.rate_r, rng);
            const double dlt = gamma_sample(g.shape_h, 2.0 / g.rate_s, rng);
            const double xi = gig_sample(-g.shape_h, a, b, rng);
            const double v =
                std::log(1.0 - lambda + lambda * lambda * eps * dlt + lambda * dlt * xi);
            acc += v;
            acc2 += v * v;
            ++cnt;
        }
        sums[tid] = acc;
        sums2[tid] = acc2;
        counts[tid] = cnt;
    });
    double sum = 0.0, sum2 = 0.0;
    long cnt = 0;
    for (unsigned tt = 0; tt < threads; ++tt) {
        sum += sums[tt];
        sum2 += sums2[tt];
        cnt += counts[tt];
    }
    out.mc.method = Method::gig;
    out.mc.value = sum / static_cast<double>(cnt);
    out.mc.cert_kind = CertKind::stat_stderr;
    out.mc.cert = std::sqrt(
        std::fmax(sum2 / static_cast<double>(cnt) - out.mc.value * out.mc.value, 0.0) /
        static_cast<double>(cnt));
    out.mc.iterations = cnt;
    out.mc.seed = seed;

    if (std::fabs(g.rate_r - g.rate_s) < 1e-12) {
        // nu(l,l) = (1-l)^{-h/2} / K_h(s sqrt(1-l)/l) *
        //           int x^{h-1} exp(-(s x/l + s(1-l)/(l x))/2) ln x dx
        const double s = g.rate_s, h = g.shape_h;
        const double arg = s * std::sqrt(1.0 - lambda) / lambda;
        const double pref = std::pow(1.0 - lambda, -0.5 * h) / bessel_k(h, arg);
        const double integral = integrate_positive_axis(
            [&](double x) {
                return std::pow(x, h - 1.0) *
                       std::exp(-0.5 * (s * x / lambda + s * (1.0 - lambda) / (lambda * x))) *
                       std::log(x);
            },
            1e-12);
        out.quadrature = pref * integral;
    }
    return out;
}

} // namespace collector
