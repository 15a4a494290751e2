#include "collector/env.hpp"

#include "collector/mat2.hpp"
#include "collector/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace collector {

namespace {

void check_atoms(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("finite stream needs atoms");
    double tot = 0.0;
    for (const auto& a : atoms) {
        if (!(a.pair.epsilon > 0.0 && a.pair.delta > 0.0))
            throw std::invalid_argument("atom rates must be strictly positive");
        if (!(a.prob >= 0.0)) throw std::invalid_argument("negative atom probability");
        tot += a.prob;
    }
    if (std::fabs(tot - 1.0) > 1e-12)
        throw std::invalid_argument("atom probabilities must sum to 1");
}

std::vector<double> cumulative(const std::vector<Atom>& atoms) {
    std::vector<double> cum(atoms.size());
    double run = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        run += atoms[i].prob;
        cum[i] = run;
    }
    cum.back() = 1.0;
    return cum;
}

double support_bound(const std::vector<Atom>& atoms) {
    double hi = 0.0;
    for (const auto& a : atoms) {
        hi = std::fmax(hi, std::fmax(a.pair.epsilon, a.pair.delta));
        hi = std::fmax(hi, std::fmax(1.0 / a.pair.epsilon, 1.0 / a.pair.delta));
    }
    return hi * (1.0 + 1e-9); // assumption's inequalities are strict
}

std::size_t pick(const std::vector<double>& cum, double u) {
    return static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
}

double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace

// ---- FiniteStream ----------------------------------------------------------

FiniteStream::FiniteStream(std::vector<Atom> atoms, std::uint64_t seed)
    : atoms_(std::move(atoms)), seed_(seed), rng_(seed) {
    check_atoms(atoms_);
    cum_ = cumulative(atoms_);
    bound_ = support_bound(atoms_);
}

EnvPair FiniteStream::draw() { return atoms_[pick(cum_, uniform01(rng_))].pair; }

std::unique_ptr<EnvStream> FiniteStream::clone(std::uint64_t stream_id) const {
    return std::make_unique<FiniteStream>(atoms_, derive_seed(seed_, stream_id));
}

std::unique_ptr<EnvStream> FiniteStream::clone_same_seed() const {
    return std::make_unique<FiniteStream>(atoms_, seed_);
}

// ---- MarkovSwitchStream ----------------------------------------------------

MarkovSwitchStream::MarkovSwitchStream(std::vector<Atom> atoms0, std::vector<Atom> atoms1,
                                       double stay0, double stay1, std::uint64_t seed)
    : stay_{stay0, stay1}, seed_(seed), rng_(seed) {
    atoms_[0] = std::move(atoms0);
    atoms_[1] = std::move(atoms1);
    check_atoms(atoms_[0]);
    check_atoms(atoms_[1]);
    if (!(stay0 > 0.0 && stay0 < 1.0 && stay1 > 0.0 && stay1 < 1.0))
        throw std::invalid_argument("stay probabilities must be in (0,1)");
    cum_[0] = cumulative(atoms_[0]);
    cum_[1] = cumulative(atoms_[1]);
    bound_ = std::fmax(support_bound(atoms_[0]), support_bound(atoms_[1]));
    // start from the stationary law of the 2-state chain
    const double p01 = 1.0 - stay0, p10 = 1.0 - stay1;
    const double pi0 = p10 / (p01 + p10);
    state_ = uniform01(rng_) < pi0 ? 0 : 1;
}

EnvPair MarkovSwitchStream::draw() {
    const EnvPair out = atoms_[state_][pick(cum_[state_], uniform01(rng_))].pair;
    if (uniform01(rng_) >= stay_[state_]) state_ = 1 - state_;
    return out;
}

std::unique_ptr<EnvStream> MarkovSwitchStream::clone(std::uint64_t stream_id) const {
    return std::make_unique<MarkovSwitchStream>(atoms_[0], atoms_[1], stay_[0], stay_[1],
                                                derive_seed(seed_, stream_id));
}

std::unique_ptr<EnvStream> MarkovSwitchStream::clone_same_seed() const {
    return std::make_unique<MarkovSwitchStream>(atoms_[0], atoms_[1], stay_[0], stay_[1], seed_);
}

// ---- GammaGigStream --------------------------------------------------------

GammaGigStream::GammaGigStream(GigSpec spec, std::uint64_t seed)
    : spec_(spec), seed_(seed), rng_(seed) {
    spec_.validate();
}

double GammaGigStream::bound_C() const { return std::numeric_limits<double>::infinity(); }

EnvPair GammaGigStream::draw() {
    const double e = gamma_sample(spec_.shape_h, 2.0 / spec_.rate_r, rng_);
    const double d = gamma_sample(spec_.shape_h, 2.0 / spec_.rate_s, rng_);
    return {e, d};
}

std::unique_ptr<EnvStream> GammaGigStream::clone(std::uint64_t stream_id) const {
    return std::make_unique<GammaGigStream>(spec_, derive_seed(seed_, stream_id));
}

std::unique_ptr<EnvStream> GammaGigStream::clone_same_seed() const {
    return std::make_unique<GammaGigStream>(spec_, seed_);
}

// ---- dual stream -----------------------------------------------------------

namespace {

// Emits (delta_n, epsilon_{n+1}) by keeping the inner stream one draw ahead.
class DualStream final : public EnvStream {
public:
    explicit DualStream(std::unique_ptr<EnvStream> inner) : inner_(std::move(inner)) {
        if (const auto* at = inner_->atoms()) {
            // i.i.d. inner: delta_n and epsilon_{n+1} are independent, so the
            // dual law is the product of the swapped margins.
            std::vector<std::pair<double, double>> eps, dlt;
            for (const auto& a : *at) {
                auto add = [](std::vector<std::pair<double, double>>& m, double v, double p) {
                    for (auto& e : m)
                        if (e.first == v) {
                            e.second += p;
                            return;
                        }
                    m.emplace_back(v, p);
                };
                add(eps, a.pair.epsilon, a.prob);
                add(dlt, a.pair.delta, a.prob);
            }
            bool product = true;
            for (const auto& a : *at) {
                double pe = 0.0, pd = 0.0;
                for (auto& e : eps)
                    if (e.first == a.pair.epsilon) pe = e.second;
                for (auto& d : dlt)
                    if (d.first == a.pair.delta) pd = d.second;
                if (std::fabs(pe * pd - a.prob) > 1e-12) product = false;
            }
            if (product) {
                for (const auto& d : dlt)
                    for (const auto& e : eps)
                        dual_atoms_.push_back({{d.first, e.first}, d.second * e.second});
            }
        }
    }

    double bound_C() const override { return inner_->bound_C(); }
    const std::vector<Atom>* atoms() const override {
        return dual_atoms_.empty() ? nullptr : &dual_atoms_;
    }
    std::string kind() const override { return "dual:" + inner_->kind(); }
    std::uint64_t seed() const override { return inner_->seed(); }
    std::unique_ptr<EnvStream> clone(std::uint64_t stream_id) const override {
        return std::make_unique<DualStream>(inner_->clone(stream_id));
    }

protected:
    EnvPair draw() override {
        if (!ahead_) {
            inner_->next();
            inner_->next();
            ahead_ = true;
        } else {
            inner_->next();
        }
        return {inner_->lag(1).delta, inner_->current().epsilon};
    }
    std::unique_ptr<EnvStream> clone_same_seed() const override {
        return std::make_unique<DualStream>(inner_->replay());
    }

private:
    std::unique_ptr<EnvStream> inner_;
    std::vector<Atom> dual_atoms_;
    bool ahead_ = false;
};

} // namespace

std::unique_ptr<EnvStream> dual_stream(const EnvStream& base) {
    return std::make_unique<DualStream>(base.replay());
}

std::unique_ptr<EnvStream> bern_stream(const BernSpec& spec, std::uint64_t seed) {
    return std::make_unique<FiniteStream>(bern_atoms(spec), seed);
}

std::unique_ptr<EnvStream> constant_stream(double epsilon, double delta) {
    return std::make_unique<FiniteStream>(std::vector<Atom>{{{epsilon, delta}, 1.0}}, 0);
}

std::vector<Atom> bern_atoms(const BernSpec& spec) {
    spec.validate();
    std::vector<Atom> atoms;
    for (double e : {spec.eps_low, spec.high})
        for (double d : {spec.delta_low, spec.high})
            atoms.push_back({{e, d}, 0.25});
    return atoms;
}

// ---- moments ---------------------------------------------------------------

EnvMoments env_moments(const EnvStream& stream, long mc_budget) {
    EnvMoments m;
    if (const auto* atoms = stream.atoms()) {
        m.exact = true;
        double ed = 0.0;
        for (const auto& a : *atoms) {
            const double e = a.pair.epsilon, d = a.pair.delta, p = a.prob;
            m.alpha += p * e;
            m.beta += p * d;
            m.gamma += p * e * d;
            m.mean_inv_gamma += p / (e * d);
            m.mean_log_gamma += p * std::log(e * d);
            ed += p * e * d;
        }
        m.cov_eps_delta = ed - m.alpha * m.beta;
        return m;
    }
    if (mc_budget <= 0)
        throw std::invalid_argument("env_moments: unbounded support requires a Monte Carlo budget");
    auto s = stream.replay();
    const double n = static_cast<double>(mc_budget);
    double se = 0, sd = 0, sg = 0, sig = 0, slg = 0;
    double se2 = 0, sd2 = 0, sg2 = 0, sig2 = 0, slg2 = 0, sed = 0;
    for (long i = 0; i < mc_budget; ++i) {
        const EnvPair p = s->next();
        const double g = p.epsilon * p.delta;
        se += p.epsilon;
        sd += p.delta;
        sg += g;
        sig += 1.0 / g;
        slg += std::log(g);
        se2 += p.epsilon * p.epsilon;
        sd2 += p.delta * p.delta;
        sg2 += g * g;
        sig2 += 1.0 / (g * g);
        slg2 += std::log(g) * std::log(g);
        sed += g;
    }
    m.alpha = se / n;
    m.beta = sd / n;
    m.gamma = sg / n;
    m.mean_inv_gamma = sig / n;
    m.mean_log_gamma = slg / n;
    m.cov_eps_delta = sed / n - m.alpha * m.beta;
    auto sem = [n](double sum, double sum2) {
        const double var = std::fmax(sum2 / n - (sum / n) * (sum / n), 0.0);
        return std::sqrt(var / n);
    };
    m.stderrs = {sem(se, se2), sem(sd, sd2), sem(sg, sg2),
                 sem(sig, sig2), sem(slg, slg2), 2.0 * sem(sg, sg2)};
    return m;
}

// ---- distributions ---------------------------------------------------------

double gamma_sample(double h, double scale_a, std::mt19937_64& rng) {
    if (!(h > 0.0 && scale_a > 0.0))
        throw std::invalid_argument("gamma_sample: parameters must be positive");
    std::gamma_distribution<double> dist(h, scale_a);
    return dist(rng);
}

double gig_log_density(double h, double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("gig_log_density: a,b must be positive");
    if (!(x > 0.0)) throw std::invalid_argument("gig_log_density: x must be positive");
    const double norm = 0.5 * h * std::log(a / b) -
                        std::log(2.0 * bessel_k(std::fabs(h), std::sqrt(a * b)));
    return norm + (h - 1.0) * std::log(x) - 0.5 * (a * x + b / x);
}

double gig_sample(double h, double a, double b, std::mt19937_64& rng) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("gig_sample: a,b must be positive");
    // density of s = ln x is proportional to exp(l(s)),
    // l(s) = h s - (a e^s + b e^{-s})/2, strictly concave.
    const auto l = [&](double s) { return h * s - 0.5 * (a * std::exp(s) + b * std::exp(-s)); };
    const auto lp = [&](double s) { return h - 0.5 * (a * std::exp(s) - b * std::exp(-s)); };
    const double smode = std::log((h + std::sqrt(h * h + a * b)) / a);
    const double curv = 0.5 * (a * std::exp(smode) + b * std::exp(-smode)); // -l''(smode)
    const double w = 1.0 / std::sqrt(curv);
    const double lmode = l(smode);
    // tangents at smode -/+ c bound l from above (concavity)
    const double c = 1.5 * w;
    const double sl = smode - c, sr = smode + c;
    const double gl = lp(sl), gr = -lp(sr); // gl,gr > 0
    const double ll = l(sl) - lmode, lr = l(sr) - lmode;
    // envelope pieces: exp(ll + gl (s - sl)) for s < xl, 1 on [xl, xr],
    // exp(lr - gr (s - sr)) for s > xr, with xl/xr where tangents hit 0
    const double xl = sl - ll / gl;
    const double xr = sr - lr / gr;
    const double mass_l = std::exp(ll + gl * (xl - sl)) / gl;
    const double mass_m = xr - xl;
    const double mass_r = std::exp(lr - gr * (xr - sr)) / gr;
    const double tot = mass_l + mass_m + mass_r;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int it = 0; it < 10000; ++it) {
        const double u = uni(rng) * tot;
        double s, logenv;
        if (u < mass_l) {
            s = xl + std::log(u / mass_l) / gl;
            logenv = ll + gl * (s - sl);
        } else if (u < mass_l + mass_m) {
            s = xl + (u - mass_l);
            logenv = 0.0;
        } else {
            s = xr - std::log(1.0 - (u - mass_l - mass_m) / mass_r) / gr;
            logenv = lr - gr * (s - sr);
        }
        if (std::log(uni(rng)) <= (l(s) - lmode) - logenv) return std::exp(s);
    }
    throw std::runtime_error("gig_sample: rejection failed to accept");
}

double bessel_k(double order, double x) {
    const double h = std::fabs(order); // K is even in the order
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be positive");
    // K_h(x) = Gamma(h+1/2) (2x)^h / sqrt(pi) * I,
    // I = int_0^inf cos(t) (t^2+x^2)^{-(h+1/2)} dt.
    // Integrate per half-period between cosine zeros; the partial sums
    // alternate, so the first omitted term bounds the tail.
    const double expo = h + 0.5;
    auto f = [&](double t) { return std::cos(t) / std::pow(t * t + x * x, expo); };
    const double pi = 3.14159265358979323846;
    double total = integrate(f, 0.0, 0.5 * pi, 1e-13);
    double t0 = 0.5 * pi;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100000; ++k) {
        const double t1 = t0 + pi;
        const double piece = integrate(f, t0, t1, 1e-13);
        total += piece;
        t0 = t1;
        const double tail = std::fabs(piece);
        if (tail < 1e-10 * std::fabs(total) && tail < last) break;
        last = tail;
    }
    if (!(total > 0.0)) throw std::runtime_error("bessel_k: quadrature failed to converge");
    const double logpref = std::lgamma(expo) + h * std::log(2.0 * x) -
                           0.5 * std::log(pi);
    return std::exp(logpref + std::log(total));
}

} // namespace collector
