#include <cmath>
#include <cstdlib>

#include "besseline/bounds.hpp"
#include "besseline/quadrature.hpp"
#include "besseline/verification.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using besseline::DomainError;
using besseline::integral_i;
using besseline::integral_k;
using besseline::Params;
using besseline::bounds::InequalityId;
using namespace besseline::verification;

TEST_CASE("verification: logspace") {
    auto xs = logspace(0.1, 100.0, 4);
    REQUIRE(xs.size() == 4);
    CHECK(xs.front() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(xs.back() == doctest::Approx(100.0).epsilon(1e-12));
    // geometric spacing: constant ratio
    CHECK(xs[1] / xs[0] == doctest::Approx(xs[2] / xs[1]).epsilon(1e-10));
    CHECK(xs[2] / xs[1] == doctest::Approx(xs[3] / xs[2]).epsilon(1e-10));
    CHECK_THROWS_AS(logspace(5.0, 5.0, 1), DomainError);
    CHECK_THROWS_AS(logspace(-1.0, 5.0, 4), DomainError);
}

TEST_CASE("verification: upper K bound holds with near-zero margin at n = 1") {
    GridSpec grid;
    grid.nus = {0.0, 1.0, 2.5, 5.0, 7.5};
    grid.ns = {1.0};
    grid.gammas = {0.0};
    grid.xs = logspace(0.1, 50.0, 6);
    VerificationReport r = verify_inequality(InequalityId::BK3, grid);
    CHECK(r.passed());
    CHECK(r.points_checked == 30);
    CHECK(r.violations.empty());
    // equality case: margins sit at quadrature noise level
    CHECK(std::fabs(r.min_margin) <= 1e-9);
}

TEST_CASE("verification: lower I bound attains equality at nu = -(n+1)/2") {
    GridSpec grid;
    grid.nus = {-0.5};
    grid.ns = {0.0};
    grid.gammas = {0.0};
    grid.xs = logspace(0.2, 20.0, 8);
    VerificationReport r = verify_inequality(InequalityId::BI2, grid);
    CHECK(r.passed());
    CHECK(std::fabs(r.min_margin) <= 1e-9);
}

TEST_CASE("verification: default grids for the strict K bounds") {
    VerificationReport r = verify_inequality(InequalityId::BK1, default_grid(InequalityId::BK1));
    CHECK(r.passed());
    CHECK(r.points_checked == 440);
    CHECK(r.min_margin > 0.0);
}

TEST_CASE("verification: the positivity lemma fails on part of its stated domain") {
    // The hypotheses admit (nu, n) = (1, 0.9), but the K combination is
    // negative there for every x. The verifier must report those points
    // rather than hide them.
    VerificationReport r =
        verify_inequality(InequalityId::LEM_A1, default_grid(InequalityId::LEM_A1));
    CHECK_FALSE(r.passed());
    CHECK(r.points_checked == 440);
    CHECK(r.violations.size() == 40);
    for (const Violation& v : r.violations) {
        CHECK(v.params.nu == 1.0);
        CHECK(v.params.n == 0.9);
        CHECK(v.rel_margin < 0.0);
    }
}

TEST_CASE("verification: margins stay positive under grid refinement") {
    GridSpec coarse;
    coarse.nus = {3.0};
    coarse.ns = {0.0};
    coarse.gammas = {0.0};
    coarse.xs = logspace(0.1, 50.0, 10);
    GridSpec fine = coarse;
    fine.xs = logspace(0.05, 80.0, 25);
    VerificationReport rc = verify_inequality(InequalityId::BK1, coarse);
    VerificationReport rf = verify_inequality(InequalityId::BK1, fine);
    CHECK(rc.passed());
    CHECK(rf.passed());
    CHECK(rf.min_margin > 0.0);
}

TEST_CASE("verification: tilted I bounds compute their constant per slice") {
    GridSpec grid;
    grid.nus = {1.0};
    grid.ns = {0.0};
    grid.gammas = {0.1};
    grid.xs = logspace(0.5, 20.0, 8);
    VerificationReport r7 = verify_inequality(InequalityId::BI7, grid);
    CHECK(r7.passed());
    CHECK(r7.points_checked == 8);
    VerificationReport r8 = verify_inequality(InequalityId::BI8, grid);
    CHECK(r8.passed());
}

TEST_CASE("verification: supremum constants") {
    struct Known {
        double nu, c;
    };
    double prev = 0.0;
    for (Known k : {Known{0.0, 1.265178014}, Known{1.0, 1.681250492},
                    Known{3.0, 2.284167744}, Known{5.0, 2.753538538},
                    Known{10.0, 3.669046738}}) {
        CAPTURE(k.nu);
        CnunResult r = compute_cnun(k.nu, 0.0);
        CHECK(std::fabs(r.c_value - k.c) <= 2e-3);
        CHECK(r.bracketed);
        CHECK(r.c_value > 1.0);
        CHECK(r.c_value <= r.upper_cap);
        CHECK(r.upper_cap == 2.0 * (k.nu + 1.0));
        CHECK(r.argmax_x > 0.0);
        CHECK(r.c_value > prev);  // increasing in nu
        prev = r.c_value;
    }
    CHECK_THROWS_AS(compute_cnun(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(compute_cnun(-0.5, 0.0), DomainError);
}

TEST_CASE("verification: relative-error tables") {
    const std::vector<double> xs = {0.5, 5.0, 10.0, 25.0, 50.0, 100.0, 250.0};
    auto rows = reproduce_tables({1.0}, xs);
    REQUIRE(rows.size() == 7);
    const double el[7] = {0.4948, 0.2359, 0.1076, 0.0409, 0.0202, 0.0101, 0.0040};
    const double eu[7] = {0.0051, 0.2038, 0.1973, 0.1034, 0.0558, 0.0290, 0.0118};
    for (int i = 0; i < 7; ++i) {
        CAPTURE(i);
        CHECK(rows[i].nu == 1.0);
        CHECK(rows[i].x == xs[i]);
        CHECK(std::fabs(rows[i].relerr_l - el[i]) <= 1e-4);
        CHECK(std::fabs(rows[i].relerr_u - eu[i]) <= 1e-4);
    }
    CHECK_THROWS_AS(reproduce_tables({0.5}, {1.0}), DomainError);

    // independent recomputation at nu = 2.5, x = 10
    long double f = oracles::corollary_f_series(2.5L, 10.0L);
    long double lo = oracles::besseli_series(2.5L, 10.0L);
    long double hi = 5.0L * oracles::besseli_series(2.5L, 10.0L) -
                     4.0L * oracles::besseli_series(4.5L, 10.0L);
    auto row = reproduce_tables({2.5}, {10.0});
    REQUIRE(row.size() == 1);
    CHECK(std::fabs(row[0].relerr_l - static_cast<double>((f - lo) / f)) <= 1e-9);
    CHECK(std::fabs(row[0].relerr_u - static_cast<double>((hi - f) / f)) <= 1e-9);

    // the upper-bound error rises to a hump and then decays along x
    auto hump = reproduce_tables({5.0}, xs);
    CHECK(hump[3].relerr_u > hump[2].relerr_u);
    CHECK(hump[3].relerr_u > hump[4].relerr_u);
}

TEST_CASE("verification: conjecture exploration at (4, 0)") {
    ConjectureReport r = explore_conjecture(4.0, 0.0);
    CHECK(r.nu == 4.0);
    CHECK(r.alpha == doctest::Approx(4.0 - std::sqrt(7.0)).epsilon(1e-12));
    CHECK(r.alpha_prime == doctest::Approx(4.0 + std::sqrt(7.0)).epsilon(1e-12));
    CHECK(r.beta_probe == doctest::Approx(r.alpha - 0.1).epsilon(1e-12));
    CHECK(r.flagged_points == 0);
    REQUIRE_FALSE(r.points.empty());
    for (const ConjecturePoint& p : r.points) {
        CAPTURE(p.x);
        CHECK(p.integral_margin > 0.0);
        CHECK(p.derivative_margin > 0.0);
    }
    // shrinking the order shift below alpha breaks the comparison at large
    // x, and the probe must find that
    CHECK(r.probe_found_negative);
    CHECK(r.probe_first_negative_x > 1.0);
    CHECK(r.probe_first_negative_x < 100.0);
}

TEST_CASE("verification: conjecture exploration degenerates to equality at n = 1") {
    ConjectureReport r = explore_conjecture(2.0, 1.0);
    CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-14));
    for (const ConjecturePoint& p : r.points) {
        CAPTURE(p.x);
        CHECK(std::fabs(p.integral_margin) <= 1e-9);
        CHECK(std::fabs(p.derivative_margin) <= 1e-12);
    }
    CHECK(r.flagged_points == 0);
    CHECK_THROWS_AS(explore_conjecture(2.0, 0.0), DomainError);
}

TEST_CASE("verification: comparison integral mapping") {
    // the untilted K bounds ignore any tilt in the parameter block
    Params p{1.0, 1.0, 0.7, 2.0};
    CHECK(comparison_integral(InequalityId::BK3, p).value ==
          integral_k({1.0, 1.0, 0.0, 2.0}).value);
    // the n = 0 tilted I bounds compare against the n = 0 integral
    Params q{1.5, 0.75, 0.25, 2.0};
    CHECK(comparison_integral(InequalityId::BI4, q).value ==
          integral_i({1.5, 0.0, 0.25, 2.0}).value);
    CHECK(comparison_integral(InequalityId::BK4, q).value == integral_k(q).value);
    CHECK(comparison_integral(InequalityId::BI7, q).value == integral_i(q).value);
    CHECK_THROWS_AS(comparison_integral(InequalityId::LEM_A1, p), DomainError);
    CHECK_THROWS_AS(comparison_integral(InequalityId::DOB22_L, p), DomainError);
}

TEST_CASE("verification: thread count honours the environment") {
    setenv("BESSELINE_THREADS", "3", 1);
    CHECK(max_threads() == 3);
    unsetenv("BESSELINE_THREADS");
    CHECK(max_threads() >= 1);
}
