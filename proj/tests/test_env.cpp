#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collector/env.hpp"
#include "collector/quad.hpp"
#include "testutil.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <set>

using namespace collector;

TEST_CASE("bern_atoms enumerates the four equally likely pairs") {
    const auto atoms = bern_atoms(testutil::bern32());
    REQUIRE(atoms.size() == 4);
    std::set<std::pair<double, double>> seen;
    for (const auto& a : atoms) {
        CHECK(a.prob == doctest::Approx(0.25));
        seen.insert({a.pair.epsilon, a.pair.delta});
    }
    const std::set<std::pair<double, double>> want{
        {0.3, 0.2}, {0.3, 2.0}, {2.0, 0.2}, {2.0, 2.0}};
    CHECK(seen == want);
}

TEST_CASE("bern gamma follows the product-of-means formula") {
    const auto m = env_moments(*bern_stream(testutil::bern95(), 1));
    // gamma = (eps+eta)(delta+eta)/4
    CHECK(m.gamma == doctest::Approx(1.050625).epsilon(1e-12));
    CHECK(m.mean_inv_gamma == doctest::Approx(0.962089).epsilon(1e-5));
}

TEST_CASE("bern spec validation rejects out-of-range lows") {
    CHECK_THROWS_AS(bern_atoms(BernSpec{1.2, 0.2, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(bern_atoms(BernSpec{0.3, 0.2, 0.9}), std::invalid_argument);
}

TEST_CASE("env_moments matches the printed BERN(0.3,0.2;2) figures") {
    const auto m = env_moments(*bern_stream(testutil::bern32(), 1));
    CHECK(m.exact);
    CHECK(m.mean_inv_gamma == doctest::Approx(5.2708).epsilon(5e-5));
    CHECK(m.gamma == doctest::Approx(1.265).epsilon(1e-12));
    CHECK(m.mean_log_gamma == doctest::Approx(0.25 * std::log(0.0576)).epsilon(1e-12));
    CHECK(m.cov_eps_delta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degenerate constant stream has gamma 1 and zero covariance") {
    const auto m = env_moments(*constant_stream(1.0, 1.0));
    CHECK(m.gamma == doctest::Approx(1.0));
    CHECK(m.cov_eps_delta == doctest::Approx(0.0));
    CHECK(m.mean_log_gamma == doctest::Approx(0.0));
}

TEST_CASE("exact moments agree with Monte Carlo within four standard errors") {
    auto stream = bern_stream(testutil::bern32(), 99);
    const auto exact = env_moments(*stream);
    // force the Monte Carlo path through a stream clone with hidden atoms
    auto mc_stream = stream->clone(7);
    long budget = 200000;
    auto s = mc_stream->replay();
    double sa = 0, sg = 0, sig = 0;
    for (long i = 0; i < budget; ++i) {
        const EnvPair p = s->next();
        sa += p.epsilon;
        sg += p.epsilon * p.delta;
        sig += 1.0 / (p.epsilon * p.delta);
    }
    const double n = static_cast<double>(budget);
    CHECK(std::fabs(sa / n - exact.alpha) < 4.0 * 0.85 / std::sqrt(n));
    CHECK(std::fabs(sg / n - exact.gamma) < 4.0 * 1.7 / std::sqrt(n));
    CHECK(std::fabs(sig / n - exact.mean_inv_gamma) < 4.0 * 7.0 / std::sqrt(n));
}

TEST_CASE("streams replay byte-identically from the same seed") {
    auto a = bern_stream(testutil::bern32(), 1234);
    auto b = a->replay();
    for (int i = 0; i < 1000; ++i) {
        const EnvPair pa = a->next(), pb = b->next();
        CHECK(pa.epsilon == pb.epsilon);
        CHECK(pa.delta == pb.delta);
    }
    auto m1 = testutil::markov_example(77);
    auto m2 = m1->replay();
    for (int i = 0; i < 1000; ++i) {
        const EnvPair pa = m1->next(), pb = m2->next();
        CHECK(pa.epsilon == pb.epsilon);
        CHECK(pa.delta == pb.delta);
    }
}

TEST_CASE("every draw respects the declared bound") {
    auto s = bern_stream(testutil::bern32(), 5);
    const double C = s->bound_C();
    CHECK(C > 5.0); // max(2, 1/0.2) with a strictness margin
    for (int i = 0; i < 4000; ++i) {
        const EnvPair p = s->next();
        CHECK(p.epsilon < C);
        CHECK(p.delta < C);
        CHECK(p.epsilon > 1.0 / C);
        CHECK(p.delta > 1.0 / C);
    }
}

TEST_CASE("dual of an i.i.d. BERN stream has the margin-swapped law") {
    auto base = bern_stream(BernSpec{0.3, 0.7, 2.0}, 42);
    auto dual = dual_stream(*base);
    const auto md = env_moments(*dual);
    const auto swapped = env_moments(*bern_stream(BernSpec{0.7, 0.3, 2.0}, 42));
    CHECK(md.exact);
    CHECK(md.alpha == doctest::Approx(swapped.alpha).epsilon(1e-12));
    CHECK(md.beta == doctest::Approx(swapped.beta).epsilon(1e-12));
    CHECK(md.gamma == doctest::Approx(swapped.gamma).epsilon(1e-12));
}

TEST_CASE("dual of a constant stream swaps the rates") {
    auto dual = dual_stream(*constant_stream(3.0, 5.0));
    for (int i = 0; i < 8; ++i) {
        const EnvPair p = dual->next();
        CHECK(p.epsilon == doctest::Approx(5.0));
        CHECK(p.delta == doctest::Approx(3.0));
    }
}

TEST_CASE("dual of a Markov stream is the hand-shifted sequence") {
    auto base = testutil::markov_example(31);
    auto dual = dual_stream(*base);
    // hand iteration on a replay of the same base stream
    auto replay = base->replay();
    std::vector<EnvPair> raw;
    for (int i = 0; i < 201; ++i) raw.push_back(replay->next());
    for (int n = 0; n < 200; ++n) {
        const EnvPair d = dual->next();
        CHECK(d.epsilon == raw[static_cast<std::size_t>(n)].delta);
        CHECK(d.delta == raw[static_cast<std::size_t>(n) + 1].epsilon);
    }
}

TEST_CASE("dual applied twice restores the i.i.d. independent-margin law") {
    auto base = bern_stream(BernSpec{0.3, 0.7, 2.0}, 9);
    auto dd = dual_stream(*dual_stream(*base));
    const auto m0 = env_moments(*base);
    const auto m2 = env_moments(*dd);
    CHECK(m2.alpha == doctest::Approx(m0.alpha).epsilon(1e-12));
    CHECK(m2.beta == doctest::Approx(m0.beta).epsilon(1e-12));
    CHECK(m2.gamma == doctest::Approx(m0.gamma).epsilon(1e-12));
}

TEST_CASE("clones advance independently") {
    auto a = bern_stream(testutil::bern32(), 1);
    auto b = a->clone(1);
    auto c = a->clone(2);
    double sb = 0, sc = 0;
    for (int i = 0; i < 2000; ++i) {
        sb += b->next().epsilon;
        sc += c->next().epsilon;
    }
    CHECK(sb != sc); // derived seeds differ
}

// ---- distributions ---------------------------------------------------------

TEST_CASE("gamma_sample mean and second moment") {
    std::mt19937_64 rng(7);
    SUBCASE("exponential case h=1, a=2") {
        double s = 0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) s += gamma_sample(1.0, 2.0, rng);
        const double se = 2.0 / std::sqrt(static_cast<double>(n)); // sd = mean for exp
        CHECK(std::fabs(s / n - 2.0) < 3.0 * se);
    }
    SUBCASE("mean h*a for h=4.5, a=0.25") {
        double s = 0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) s += gamma_sample(4.5, 0.25, rng);
        const double sd = std::sqrt(4.5) * 0.25;
        CHECK(std::fabs(s / n - 1.125) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
    }
    SUBCASE("second moment vs quadrature of the density") {
        const double h = 4.5, a = 0.25;
        // independent oracle: adaptive quadrature of x^2 f_{h,a}(x)
        const double m2_quad = integrate_positive_axis([&](double x) {
            return x * x * std::pow(a, -h) / std::tgamma(h) * std::pow(x, h - 1.0) *
                   std::exp(-x / a);
        });
        CHECK(m2_quad == doctest::Approx(h * (h + 1.0) * a * a).epsilon(1e-9));
        double s2 = 0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            const double x = gamma_sample(h, a, rng);
            s2 += x * x;
        }
        CHECK(std::fabs(s2 / n - m2_quad) < 4.0 * 0.02);
    }
}

TEST_CASE("gig_log_density normalizes and obeys the reciprocal law") {
    const double h = -4.5, a = 8.0 / 0.69, b = 8.0 * 0.31 / 0.69;
    const double total = integrate_positive_axis(
        [&](double x) { return std::exp(gig_log_density(h, a, b, x)); });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    for (double x : {0.05, 0.3, 1.0, 4.0}) {
        // g_{h,a,b}(x) = g_{-h,b,a}(1/x) / x^2
        const double lhs = gig_log_density(h, a, b, x);
        const double rhs = gig_log_density(-h, b, a, 1.0 / x) - 2.0 * std::log(x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }

    for (double lx = -6.0; lx <= 6.0; lx += 0.5) {
        const double g = gig_log_density(h, a, b, std::exp(lx));
        CHECK(std::isfinite(g)); // log-density finite <=> density positive
    }
}

TEST_CASE("gig_sample matches the quadrature CDF (KS)") {
    const double h = -4.5, a = 8.0 / 0.69, b = 8.0 * 0.31 / 0.69;
    std::mt19937_64 rng(11);
    std::vector<double> draws(100000);
    for (auto& d : draws) d = gig_sample(h, a, b, rng);
    auto cdf = testutil::cdf_of_density(
        [&](double x) { return std::exp(gig_log_density(h, a, b, x)); }, 1e-6, 1e3);
    CHECK(testutil::ks_distance(draws, cdf) < 0.01);
}

TEST_CASE("gig convolution identity g_{h,a,b} = g_{-h,a,b} * f_{h,2/a}") {
    const double h = 2.5, a = 3.0, b = 1.5;
    std::mt19937_64 rng(13);
    std::vector<double> sums(100000);
    for (auto& s : sums)
        s = gig_sample(-h, a, b, rng) + gamma_sample(h, 2.0 / a, rng);
    auto cdf = testutil::cdf_of_density(
        [&](double x) { return std::exp(gig_log_density(h, a, b, x)); }, 1e-6, 1e3);
    CHECK(testutil::ks_distance(sums, cdf) < 0.01);
}

TEST_CASE("gig scaling law: c*xi ~ g_{h,a/c,bc}") {
    const double h = -1.5, a = 2.0, b = 3.0, c = 2.5;
    std::mt19937_64 rng(17);
    std::vector<double> scaled(100000);
    for (auto& s : scaled) s = c * gig_sample(h, a, b, rng);
    auto cdf = testutil::cdf_of_density(
        [&](double x) { return std::exp(gig_log_density(h, a / c, b * c, x)); }, 1e-7, 1e4);
    CHECK(testutil::ks_distance(scaled, cdf) < 0.01);
}

TEST_CASE("bessel_k closed form, symmetry and reference values") {
    const double pi = 3.14159265358979323846;
    CHECK(bessel_k(0.5, 1.0) ==
          doctest::Approx(std::sqrt(pi / 2.0) * std::exp(-1.0)).epsilon(1e-9));
    // negative order maps to |order|
    CHECK(bessel_k(-2.5, 3.0) == doctest::Approx(bessel_k(2.5, 3.0)).epsilon(1e-12));
    const double x_key = 8.0 * std::sqrt(0.31) / 0.69;
    const double v = bessel_k(4.5, x_key);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    // independent implementation as oracle
    CHECK(v == doctest::Approx(boost::math::cyl_bessel_k(4.5, x_key)).epsilon(1e-8));
    for (double ord : {0.75, 1.0, 3.25}) {
        for (double x : {0.4, 2.0, 9.0}) {
            CHECK(bessel_k(ord, x) ==
                  doctest::Approx(boost::math::cyl_bessel_k(ord, x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("unbounded stream moments require a budget, bounded is exact") {
    GammaGigStream gig({4.5, 8.0, 8.0}, 3);
    CHECK_THROWS_AS(env_moments(gig), std::invalid_argument);
    const auto m = env_moments(gig, 100000);
    CHECK_FALSE(m.exact);
    CHECK(std::fabs(m.alpha - 1.125) < 4.0 * m.stderrs[0]);
    CHECK(std::fabs(m.gamma - 1.265625) < 4.0 * m.stderrs[2]);
}
