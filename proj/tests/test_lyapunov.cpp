#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collector/lyapunov.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace collector;

namespace {
const Policy kStar{0.265, 0.284};

std::vector<Atom> atoms32() { return bern_atoms(testutil::bern32()); }
} // namespace

// ---- boundary ---------------------------------------------------------------

TEST_CASE("boundary values: zero edges and the printed figures") {
    auto s = bern_stream(testutil::bern32(), 1);
    CHECK(nu_boundary(Policy{0.0, 0.7}, *s).value == 0.0);
    CHECK(nu_boundary(Policy{0.7, 0.0}, *s).value == 0.0);
    CHECK(nu_boundary(Policy{0.132304, 1.0}, *s).value ==
          doctest::Approx(0.0160933).epsilon(1e-4)); // 1e-6 absolute below
    CHECK(std::fabs(nu_boundary(Policy{0.132304, 1.0}, *s).value - 0.0160933) < 1e-6);

    auto s95 = bern_stream(testutil::bern95(), 1);
    const double corner = nu_boundary(Policy{1.0, 1.0}, *s95).value;
    CHECK(corner == doctest::Approx(std::log(0.95 * 1.1)).epsilon(1e-12)); // E ln gamma_0
}

TEST_CASE("eccentric edge equals the speculator edge under i.i.d. margins") {
    auto s = bern_stream(testutil::bern32(), 1);
    const double spec = nu_boundary(Policy{0.4, 1.0}, *s).value;
    const double ecc = nu_boundary(Policy{1.0, 0.4}, *s).value;
    CHECK(spec == doctest::Approx(ecc).epsilon(1e-12));
}

TEST_CASE("boundary on a Markov stream via Monte Carlo") {
    auto s = testutil::markov_example(5);
    const auto e = nu_boundary(Policy{0.3, 1.0}, *s, 200000);
    CHECK(e.cert_kind == CertKind::stat_stderr);
    CHECK(std::isfinite(e.value));
}

// ---- direct -------------------------------------------------------------------

TEST_CASE("direct estimator at the near-optimal interior point") {
    auto s = bern_stream(testutil::bern32(), 12);
    DirectOptions opt;
    opt.rel_tol = 1e-5;
    opt.replications = 24;
    const auto e = nu_direct(kStar, *s, opt);
    CHECK(e.converged);
    // true value 0.0199189025 (certified transfer computation)
    CHECK(std::fabs(e.value - 0.0199189) < 3.5 * e.cert + 3e-4);
    CHECK(std::fabs(e.value - 0.0199) < 3e-3);
}

TEST_CASE("direct estimate does not depend on the initial state") {
    auto s = bern_stream(testutil::bern32(), 5);
    DirectOptions a;
    a.rel_tol = 1e-4;
    a.replications = 16;
    a.x0 = 1.0;
    a.y0 = 0.0;
    DirectOptions b = a;
    b.x0 = 0.0;
    b.y0 = 1.0;
    b.stream_id = a.stream_id + 1000;
    const auto ea = nu_direct(kStar, *s, a);
    const auto eb = nu_direct(kStar, *s, b);
    CHECK(std::fabs(ea.value - eb.value) < 3.0 * (ea.cert + eb.cert) + 1e-4);
}

TEST_CASE("gamma=1 degenerate stream gives nu ~ 0") {
    auto s = constant_stream(1.0, 1.0);
    DirectOptions opt;
    opt.rel_tol = 1e-6;
    opt.max_iter = 200000;
    opt.replications = 4;
    const auto e = nu_direct(Policy{0.5, 0.5}, *s, opt);
    CHECK(std::fabs(e.value) < 1e-4);
}

TEST_CASE("direct estimator rejects boundary policies") {
    auto s = bern_stream(testutil::bern32(), 9);
    CHECK_THROWS_AS(nu_direct(Policy{0.0, 0.5}, *s), std::invalid_argument);
}

// ---- continued fractions ---------------------------------------------------------

TEST_CASE("cf paths are nonincreasing in depth") {
    auto s = bern_stream(testutil::bern32(), 77);
    for (int rep = 0; rep < 50; ++rep) {
        const auto path = cf_path(kStar, *s, 40);
        for (std::size_t i = 1; i < path.size(); ++i) {
            CHECK(path[i] <= path[i - 1] + 1e-12);
            CHECK(path[i] > 0.0);
        }
    }
}

TEST_CASE("cf certificate constants and branch continuity") {
    // at lambda = theta both branch formulas coincide
    const Policy p{0.4, 0.4};
    const double C = 5.01, C2 = C * C;
    const CertCF c = cf_certificate(p, C, 50, nullptr);
    const double branch_le = std::pow((1.0 - 0.4) / (1.0 - 0.4 + 0.16 / C2), 2);
    const double branch_ge = branch_le; // same expression at lambda = theta
    CHECK(c.h0 == doctest::Approx(branch_le).epsilon(1e-15));
    CHECK(c.h0 == doctest::Approx(branch_ge).epsilon(1e-15));
    CHECK(c.C0 ==
          doctest::Approx(C2 * (0.6 + (0.6 + 0.16) * C2) / (0.6 + 0.16 / C2)).epsilon(1e-15));
}

TEST_CASE("cf bias bound decays geometrically and is tiny at (0.5,0.5), C=5.01") {
    const auto atoms = atoms32();
    double prev = 1e300;
    for (int depth : {10, 20, 30, 40, 50}) {
        const CertCF c = cf_certificate(Policy{0.5, 0.5}, 5.01, depth, &atoms);
        CHECK(c.bias_bound < prev);
        prev = c.bias_bound;
    }
    const CertCF c50 = cf_certificate(Policy{0.5, 0.5}, 5.01, 50, &atoms);
    CHECK(c50.bias_bound < 1e-6);
    CHECK(c50.h.has_value());
    CHECK(*c50.h < c50.h0);
}

TEST_CASE("cf estimator agrees with the certified transfer value") {
    auto s = bern_stream(testutil::bern32(), 3);
    CfOptions opt;
    opt.depth = 150;
    opt.replications = 150000;
    const auto cf = nu_cf(kStar, *s, opt);
    CHECK(cf.est.converged);
    // one-sided bias: E ln u_n >= nu
    const double nu_ref = 0.019918902506;
    CHECK(cf.est.value + 3.0 * cf.est.cert > nu_ref - 1e-9);
    CHECK(std::fabs(cf.est.value - nu_ref) < 3.0 * cf.est.cert + cf.cert.bias_bound);
}

TEST_CASE("v-side estimator agrees with the u-side within certificates") {
    auto s = bern_stream(testutil::bern32(), 4);
    CfOptions opt;
    opt.depth = 150;
    opt.replications = 120000;
    const auto u = nu_cf(kStar, *s, opt);
    opt.stream_id += 17;
    const auto v = nu_cf_v(kStar, *s, opt);
    CHECK(std::fabs(u.est.value - v.est.value) <
          3.0 * (u.est.cert + v.est.cert) + u.cert.bias_bound + v.cert.bias_bound);
}

TEST_CASE("cf rejects boundary policies and unbounded streams") {
    auto s = bern_stream(testutil::bern32(), 5);
    CHECK_THROWS_AS(nu_cf(Policy{0.0, 0.5}, *s), std::invalid_argument);
    CHECK_THROWS_AS(cf_certificate(Policy{0.0, 0.5}, 5.0, 10), std::invalid_argument);
    GammaGigStream gig({4.5, 8.0, 8.0}, 3);
    CHECK_THROWS_AS(nu_cf(Policy{0.3, 0.3}, gig), std::invalid_argument);
}

// ---- Birkhoff / transfer -----------------------------------------------------------

TEST_CASE("birkhoff_tau closed form and degenerate cases") {
    CHECK(birkhoff_tau(Mat2{1, 2, 2, 4}) == doctest::Approx(0.0)); // proportional rows
    CHECK(birkhoff_tau(Mat2{1, 1, 1, 1}) == doctest::Approx(0.0));
    // M at (0.5,0.5) with (eps,delta)=(2,2): psi = l t e d / (1-l+l t e d) = 2/3
    const Mat2 M = step_matrix(Policy{0.5, 0.5}, EnvPair{2.0, 2.0});
    const double psi = 1.0 / 1.5;
    CHECK(birkhoff_tau(M) ==
          doctest::Approx((1.0 - std::sqrt(psi)) / (1.0 + std::sqrt(psi))).epsilon(1e-14));
    CHECK_THROWS_AS(birkhoff_tau(Mat2{1, 0, 1, 1}), std::domain_error);
}

TEST_CASE("birkhoff_tau is the sup of Hilbert-metric contraction ratios") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    auto hilbert = [](double ux, double uy) { return std::fabs(std::log(ux / uy)); };
    for (int rep = 0; rep < 10; ++rep) {
        const Mat2 A{u(rng), u(rng), u(rng), u(rng)};
        const double tau = birkhoff_tau(A);
        double worst = 0.0;
        for (int i = 0; i < 20000; ++i) {
            const double x = u(rng), y = u(rng); // ratio coordinates of two directions
            if (std::fabs(std::log(x / y)) < 1e-8) continue;
            const double tx = (A.a21 + A.a22 * x) / (A.a11 + A.a12 * x);
            const double ty = (A.a21 + A.a22 * y) / (A.a11 + A.a12 * y);
            worst = std::fmax(worst, hilbert(tx, ty) / hilbert(x, y));
        }
        CHECK(worst <= tau + 1e-10);
        CHECK(worst > 0.5 * tau); // the sup is approached on random pairs
    }
}

TEST_CASE("transfer theta and certificate at the near-optimal point") {
    // regression pins for the certified computation (the paper prints
    // 0.6088577 / 3.004159e-5 from its unrounded refinement point; see notes)
    const double th = transfer_theta(kStar, atoms32());
    CHECK(th == doctest::Approx(0.6089111263).epsilon(1e-9));
    const double cert = transfer_cert(kStar, atoms32(), 20);
    CHECK(cert == doctest::Approx(3.9383e-5).epsilon(1e-3));
    CHECK(transfer_cert(kStar, atoms32(), 25) < cert);
}

TEST_CASE("transfer converged value hits the published tail to 1e-6") {
    TransferOptions opt;
    opt.n_iter = 60;
    const auto te = nu_transfer(kStar, atoms32(), opt);
    CHECK_FALSE(te.exact_mode);
    CHECK(std::fabs(te.est.value - 0.019919081) < 1e-6);
    CHECK(te.est.value == doctest::Approx(0.019918902506).epsilon(1e-7));
    CHECK(te.est.cert < 1e-9 + te.interp_fold + 1e-12);
}

TEST_CASE("transfer exact enumeration matches the grid iteration") {
    TransferOptions exact_opt;
    exact_opt.n_iter = 8;
    const auto ex = nu_transfer(kStar, atoms32(), exact_opt);
    CHECK(ex.exact_mode);
    TransferOptions grid_opt;
    grid_opt.n_iter = 8;
    grid_opt.exact_cap = 2; // force grid
    const auto gr = nu_transfer(kStar, atoms32(), grid_opt);
    CHECK_FALSE(gr.exact_mode);
    for (int n = 0; n <= 8; ++n)
        CHECK(ex.iterates[static_cast<std::size_t>(n)] ==
              doctest::Approx(gr.iterates[static_cast<std::size_t>(n)]).epsilon(1e-7));
}

TEST_CASE("transfer certificate decays no slower than theta per iteration") {
    TransferOptions opt;
    opt.n_iter = 20;
    const auto te = nu_transfer(kStar, atoms32(), opt);
    // fit the decay of iterate differences over n = 10..20
    for (int n = 11; n <= 20; ++n) {
        const double d1 = std::fabs(te.iterates[static_cast<std::size_t>(n)] -
                                    te.iterates[static_cast<std::size_t>(n) - 1]);
        const double d0 = std::fabs(te.iterates[static_cast<std::size_t>(n) - 1] -
                                    te.iterates[static_cast<std::size_t>(n) - 2]);
        if (d0 > 1e-14) CHECK(d1 / d0 <= te.theta + 0.02);
    }
}

TEST_CASE("transfer rejects boundary policies") {
    CHECK_THROWS_AS(nu_transfer(Policy{0.5, 1.0}, atoms32(), {}), std::domain_error);
    CHECK_THROWS_AS(transfer_theta(Policy{0.0, 0.5}, atoms32()), std::domain_error);
}

TEST_CASE("transfer stopping rule needs the floor and then fires") {
    TransferOptions opt;
    opt.n_iter = 60;
    opt.rel_tol = 1e-3;
    opt.min_iter = 8;
    const auto te = nu_transfer(kStar, atoms32(), opt);
    CHECK(te.est.converged);
    CHECK(te.est.iterations >= 8);
    CHECK(te.est.iterations < 20);
    CHECK(std::fabs(te.est.value - 0.0199189) < 1e-3);
}

// ---- Moebius / ratio -----------------------------------------------------------

TEST_CASE("moebius composition and point at infinity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Mat2 A{u(rng), u(rng), u(rng), u(rng)};
        const Mat2 B{u(rng), u(rng), u(rng), u(rng)};
        const double x = u(rng);
        CHECK(moebius_apply(A, moebius_apply(B, x)) ==
              doctest::Approx(moebius_apply(A * B, x)).epsilon(1e-12));
    }
    const Mat2 A{2.0, 1.0, 0.5, 3.0};
    CHECK(moebius_apply(A, std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
}

TEST_CASE("T at infinity equals the X/Y ratio when Y0 = 0") {
    const Policy p = kStar;
    auto s = bern_stream(testutil::bern32(), 8);
    Mat2 prod{1, 0, 0, 1};
    Vec2 v{1.0, 0.0};
    for (int k = 0; k < 12; ++k) {
        const Mat2 M = step_matrix(p, s->next());
        prod = M * prod;
        v = M.apply(v);
    }
    CHECK(moebius_apply(prod, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(v.x / v.y).epsilon(1e-12));
}

TEST_CASE("backward ratio distribution stabilizes (KS between generations)") {
    const Policy p = kStar;
    auto stream = bern_stream(testutil::bern32(), 21);
    auto draw_T = [&](int depth, std::uint64_t id) {
        std::vector<double> out(100000);
        auto s = stream->clone(id);
        for (auto& t : out) {
            Mat2 W = step_matrix(p, s->next());
            for (int k = 1; k < depth; ++k) W = W * step_matrix(p, s->next());
            t = W.a11 / W.a21;
        }
        return out;
    };
    auto gen_n = draw_T(24, 1);
    auto gen_2n = draw_T(48, 2);
    std::sort(gen_2n.begin(), gen_2n.end());
    // two-sample KS via the sorted reference as an empirical CDF
    auto cdf = [&](double x) {
        return static_cast<double>(std::lower_bound(gen_2n.begin(), gen_2n.end(), x) -
                                   gen_2n.begin()) /
               static_cast<double>(gen_2n.size());
    };
    CHECK(testutil::ks_distance(gen_n, cdf) < 0.01);
}

TEST_CASE("ratio-based estimator agrees with cf and direct, vanishes as lambda -> 0") {
    auto s = bern_stream(testutil::bern32(), 6);
    const auto r = nu_via_ratio(kStar, *s, 60, 150000);
    const double nu_ref = 0.019918902506;
    CHECK(std::fabs(r.value - nu_ref) < 3.5 * r.cert + 1e-4);

    CfOptions copt;
    copt.replications = 100000;
    const auto cf = nu_cf(kStar, *s, copt);
    CHECK(std::fabs(r.value - cf.est.value) <
          3.0 * (r.cert + cf.est.cert) + cf.cert.bias_bound + 1e-4);

    const auto tiny = nu_via_ratio(Policy{1e-6, 0.5}, *s, 40, 20000);
    CHECK(std::fabs(tiny.value) < 1e-4);
}

// ---- GIG diagonal -----------------------------------------------------------------

TEST_CASE("GIG diagonal: quadrature matches the printed example value") {
    const GigSpec g{4.5, 8.0, 8.0};
    const auto e = nu_gig_diagonal(g, 0.69, 400000, 1);
    REQUIRE(e.quadrature.has_value());
    CHECK(std::fabs(*e.quadrature - 0.062518) < 5e-4);
    CHECK(*e.quadrature == doctest::Approx(0.0625055).epsilon(1e-4));
    // Monte Carlo route agrees with the quadrature within 3 stderr
    CHECK(std::fabs(e.mc.value - *e.quadrature) < 3.0 * e.mc.cert);
}

TEST_CASE("GIG diagonal: MC and quadrature agree across lambdas") {
    const GigSpec g{4.5, 8.0, 8.0};
    for (double lam : {0.3, 0.5}) {
        const auto e = nu_gig_diagonal(g, lam, 300000, 7);
        REQUIRE(e.quadrature.has_value());
        CHECK(std::fabs(e.mc.value - *e.quadrature) < 3.5 * e.mc.cert);
    }
}

TEST_CASE("GIG diagonal rejects bad lambda") {
    CHECK_THROWS_AS(nu_gig_diagonal(GigSpec{4.5, 8, 8}, 0.0, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(nu_gig_diagonal(GigSpec{4.5, 8, 8}, 1.0, 100, 1), std::invalid_argument);
}

// ---- cross-cutting invariants ------------------------------------------------------

TEST_CASE("method agreement: |direct - transfer| within combined certificates") {
    auto s = bern_stream(testutil::bern32(), 14);
    for (const Policy p : {Policy{0.2, 0.3}, Policy{0.5, 0.5}, kStar}) {
        TransferOptions topt;
        topt.n_iter = 40;
        const auto t = nu_transfer(p, atoms32(), topt);
        DirectOptions dopt;
        dopt.rel_tol = 1e-4;
        dopt.replications = 16;
        dopt.max_iter = 1000000;
        const auto d = nu_direct(p, *s, dopt);
        CHECK(std::fabs(d.value - t.est.value) < 3.0 * d.cert + t.est.cert + 2e-4);
    }
}

TEST_CASE("cf bias is one-sided above the certified value") {
    auto s = bern_stream(testutil::bern32(), 15);
    TransferOptions topt;
    topt.n_iter = 40;
    const auto t = nu_transfer(kStar, atoms32(), topt);
    CfOptions copt;
    copt.depth = 60; // moderate depth leaves a visible positive bias
    copt.replications = 200000;
    const auto cf = nu_cf(kStar, *s, copt);
    CHECK(cf.est.value >= t.est.value - t.est.cert - 3.0 * cf.est.cert);
}

TEST_CASE("nu symmetry under margin swap with swapped policy") {
    auto sa = bern_stream(BernSpec{0.3, 0.2, 2.0}, 16);
    auto sb = bern_stream(BernSpec{0.2, 0.3, 2.0}, 17);
    const auto ta = nu_transfer(Policy{0.3, 0.5}, bern_atoms(BernSpec{0.3, 0.2, 2.0}), {});
    const auto tb = nu_transfer(Policy{0.5, 0.3}, bern_atoms(BernSpec{0.2, 0.3, 2.0}), {});
    CHECK(ta.est.value == doctest::Approx(tb.est.value).epsilon(1e-9));
    // and with the statistical estimators within 3 combined stderr
    DirectOptions dopt;
    dopt.rel_tol = 1e-4;
    dopt.replications = 12;
    const auto da = nu_direct(Policy{0.3, 0.5}, *sa, dopt);
    const auto db = nu_direct(Policy{0.5, 0.3}, *sb, dopt);
    CHECK(std::fabs(da.value - db.value) < 3.0 * (da.cert + db.cert) + 2e-4);
}

TEST_CASE("boundary continuity: interior estimates approach the edge value") {
    auto s = bern_stream(testutil::bern32(), 18);
    for (double lam : {0.2, 0.5, 0.8}) {
        const auto edge = nu_boundary(Policy{lam, 1.0}, *s);
        TransferOptions topt;
        topt.n_iter = 80;
        const auto near = nu_transfer(Policy{lam, 1.0 - 1e-3}, atoms32(), topt);
        CHECK(std::fabs(near.est.value - edge.value) < 5e-3);
    }
}

TEST_CASE("sign law: subcritical streams keep every estimate nonpositive") {
    const BernSpec spec{0.5, 0.5, 1.05}; // gamma = 1.55^2/4 = 0.600625 < 1
    auto s = bern_stream(spec, 19);
    const auto m = env_moments(*s);
    REQUIRE(m.gamma < 1.0);
    REQUIRE(m.cov_eps_delta >= 0.0);
    for (const Policy p : {Policy{0.3, 0.3}, Policy{0.7, 0.5}, Policy{0.1, 0.9}}) {
        const auto t = nu_transfer(p, bern_atoms(spec), {});
        CHECK(t.est.value <= 0.0 + t.est.cert);
    }
    // supercritical: some small-lambda policy near theta=1 is positive
    const auto t = nu_transfer(Policy{0.132, 0.999}, atoms32(), {});
    CHECK(t.est.value > 0.0);
}
