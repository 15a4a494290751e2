#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace collector {

/// One draw of the random environment: buy rate (art units per currency)
/// and sell rate (currency per art unit). Both strictly positive.
struct EnvPair {
    double epsilon = 1.0;
    double delta = 1.0;
};

struct Atom {
    EnvPair pair;
    double prob = 0.0;
};

/// Two-point i.i.d. model: each rate is its low value or `high` with
/// probability 1/2, all four combinations independent.
struct BernSpec {
    double eps_low;
    double delta_low;
    double high;

    void validate() const {
        if (!(eps_low > 0.0 && eps_low < 1.0))
            throw std::invalid_argument("BernSpec: eps_low must be in (0,1)");
        if (!(delta_low > 0.0 && delta_low < 1.0))
            throw std::invalid_argument("BernSpec: delta_low must be in (0,1)");
        if (!(high > 1.0))
            throw std::invalid_argument("BernSpec: high must be > 1");
    }
};

/// Gamma-margin environment of the diagonal closed-form case:
/// epsilon ~ Gamma(shape_h, 2/rate_r), delta ~ Gamma(shape_h, 2/rate_s).
struct GigSpec {
    double shape_h;
    double rate_r;
    double rate_s;

    void validate() const {
        if (!(shape_h > 0.0 && rate_r > 0.0 && rate_s > 0.0))
            throw std::invalid_argument("GigSpec: h, r, s must be positive");
    }
};

/// Stationary ergodic source of (epsilon_n, delta_n) pairs.
///
/// Single-consumer and stateful. The first call to next() internally draws
/// one pre-sample (the pair at index -1), so lag(1) is valid from the start;
/// this is the double-sided extension consumers need to form
/// d_n = delta_n/delta_{n-1} at n = 0. clone(id) yields a fresh stream with
/// an independently derived seed, safe to advance in parallel.
class EnvStream {
public:
    virtual ~EnvStream() = default;

    EnvPair next() {
        if (nhist_ == 0) push(draw()); // pre-sample (index -1)
        push(draw());
        return hist_[0];
    }

    /// Pair emitted k draws ago (k=1: previous, k=2: one before that).
    const EnvPair& lag(int k) const {
        if (k < 1 || k > 2 || nhist_ <= k)
            throw std::logic_error("EnvStream::lag: history not available");
        return hist_[static_cast<std::size_t>(k)];
    }

    const EnvPair& current() const {
        if (nhist_ == 0) throw std::logic_error("EnvStream::current before next()");
        return hist_[0];
    }

    /// Declared support bound C (Assumption-style): all rates lie in
    /// (1/C, C) almost surely. +infinity for unbounded (gamma/GIG) streams.
    virtual double bound_C() const = 0;

    /// Atom list when the per-draw law has finite support and draws are
    /// i.i.d.; nullptr otherwise.
    virtual const std::vector<Atom>* atoms() const { return nullptr; }

    virtual std::string kind() const = 0;
    virtual std::uint64_t seed() const = 0;

    /// Fresh, unadvanced stream with seed derived from (seed(), stream_id).
    virtual std::unique_ptr<EnvStream> clone(std::uint64_t stream_id) const = 0;

    /// Fresh restart of this exact stream (same seed, state reset).
    std::unique_ptr<EnvStream> replay() const { return clone_same_seed(); }

protected:
    virtual EnvPair draw() = 0;
    virtual std::unique_ptr<EnvStream> clone_same_seed() const = 0;

private:
    void push(const EnvPair& p) {
        hist_[2] = hist_[1];
        hist_[1] = hist_[0];
        hist_[0] = p;
        if (nhist_ < 3) ++nhist_;
    }

    std::array<EnvPair, 3> hist_{};
    int nhist_ = 0;
};

/// Finite-support i.i.d. pair stream (atoms need not factorize).
class FiniteStream final : public EnvStream {
public:
    FiniteStream(std::vector<Atom> atoms, std::uint64_t seed);

    double bound_C() const override { return bound_; }
    const std::vector<Atom>* atoms() const override { return &atoms_; }
    std::string kind() const override { return "finite-support"; }
    std::uint64_t seed() const override { return seed_; }
    std::unique_ptr<EnvStream> clone(std::uint64_t stream_id) const override;

protected:
    EnvPair draw() override;
    std::unique_ptr<EnvStream> clone_same_seed() const override;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cum_;
    double bound_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

/// Two-state Markov modulation of (epsilon, delta): in state s the pair is
/// drawn from atoms_s; the state chain has stay probabilities (stay0, stay1)
/// and is started from its stationary law. Stationary and ergodic but not
/// i.i.d.; exercises the general code paths.
class MarkovSwitchStream final : public EnvStream {
public:
    MarkovSwitchStream(std::vector<Atom> atoms0, std::vector<Atom> atoms1,
                       double stay0, double stay1, std::uint64_t seed);

    double bound_C() const override { return bound_; }
    std::string kind() const override { return "custom-ergodic"; }
    std::uint64_t seed() const override { return seed_; }
    std::unique_ptr<EnvStream> clone(std::uint64_t stream_id) const override;

protected:
    EnvPair draw() override;
    std::unique_ptr<EnvStream> clone_same_seed() const override;

private:
    std::vector<Atom> atoms_[2];
    std::vector<double> cum_[2];
    double stay_[2];
    double bound_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    int state_;
};

/// Independent gamma margins per GigSpec. Unbounded support: bound_C() is
/// +infinity and operations that require the support bound must reject it.
class GammaGigStream final : public EnvStream {
public:
    GammaGigStream(GigSpec spec, std::uint64_t seed);

    double bound_C() const override;
    std::string kind() const override { return "gamma-gig"; }
    std::uint64_t seed() const override { return seed_; }
    std::unique_ptr<EnvStream> clone(std::uint64_t stream_id) const override;
    const GigSpec& spec() const { return spec_; }

protected:
    EnvPair draw() override;
    std::unique_ptr<EnvStream> clone_same_seed() const override;

private:
    GigSpec spec_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

std::unique_ptr<EnvStream> bern_stream(const BernSpec& spec, std::uint64_t seed);
std::unique_ptr<EnvStream> constant_stream(double epsilon, double delta);

/// The swapped-and-shifted environment (delta_n, epsilon_{n+1}).
std::unique_ptr<EnvStream> dual_stream(const EnvStream& base);

/// Exactly the four atoms of a BernSpec, probability 1/4 each.
std::vector<Atom> bern_atoms(const BernSpec& spec);

struct EnvMoments {
    double alpha = 0.0;          // E(epsilon)
    double beta = 0.0;           // E(delta)
    double gamma = 0.0;          // E(epsilon*delta)
    double mean_inv_gamma = 0.0; // E(1/(epsilon*delta))
    double mean_log_gamma = 0.0; // E(ln(epsilon*delta))
    double cov_eps_delta = 0.0;
    bool exact = false;
    // standard errors (alpha, beta, gamma, inv_gamma, log_gamma, cov); all
    // zero when exact
    std::array<double, 6> stderrs{};
};

/// Exact over the atom list for finite support; Monte Carlo with the given
/// sample budget otherwise. Unbounded streams without a budget are rejected.
EnvMoments env_moments(const EnvStream& stream, long mc_budget = 0);

// ---- distributions -------------------------------------------------------

/// Gamma(h, a) draw (shape h, scale a; density f_{h,a}).
double gamma_sample(double h, double scale_a, std::mt19937_64& rng);

/// log of the generalized inverse Gaussian density g_{h,a,b}(x),
/// normalized via the Bessel function K_{|h|}(sqrt(ab)).
double gig_log_density(double h, double a, double b, double x);

/// Exact GIG(h,a,b) draw by tangent-envelope rejection in log space
/// (the density is strictly log-concave in ln x for every h).
double gig_sample(double h, double a, double b, std::mt19937_64& rng);

/// Modified Bessel function of the second kind by adaptive quadrature of the
/// cosine integral representation, relative error <= 1e-8. Negative orders
/// map to |order| (K is even in its order).
double bessel_k(double order, double x);

} // namespace collector
