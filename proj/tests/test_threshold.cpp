#include <cmath>
#include <random>

#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/quad.hpp"
#include "critsob/threshold.hpp"
#include "doctest.h"

using namespace critsob;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Brute-force minimum of A l^-a + B l^b on a fine log grid, refined twice.
double grid_min(double A, double B, double a, double b) {
    double lo = -20.0, hi = 20.0, best = 0.0;
    for (int pass = 0; pass < 4; ++pass) {
        double bv = 1e300;
        const int m = 4000;
        for (int i = 0; i <= m; ++i) {
            const double y = lo + (hi - lo) * i / m;
            const double v = A * std::exp(-a * y) + B * std::exp(b * y);
            if (v < bv) {
                bv = v;
                best = y;
            }
        }
        const double w = (hi - lo) / m;
        lo = best - 2 * w;
        hi = best + 2 * w;
    }
    return A * std::exp(-a * best) + B * std::exp(b * best);
}
}  // namespace

TEST_CASE("g_min closed form") {
    GMin m = g_min(1, 1, 1, 1);
    CHECK(rel(m.ell, 1.0) < 1e-14);
    CHECK(rel(m.value, 2.0) < 1e-14);
    m = g_min(2, 8, 1, 1);
    CHECK(rel(m.ell, 0.5) < 1e-14);
    CHECK(rel(m.value, 8.0) < 1e-14);
    CHECK(rel(m.value, grid_min(2, 8, 1, 1)) < 1e-10);
    // a = 2s, b = 2(1-s) at s = 1/2 is the symmetric case
    CHECK(rel(g_min(3, 5, 1, 1).value, g_min(3, 5, 2 * 0.5, 2 * (1 - 0.5)).value) < 1e-15);
    CHECK_THROWS_AS(g_min(0, 1, 1, 1), DomainError);

    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> coef(-3.0, 3.0), expo(0.1, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double A = std::pow(10.0, coef(rng)), B = std::pow(10.0, coef(rng));
        const double a = expo(rng), b = expo(rng);
        const GMin c = g_min(A, B, a, b);
        const GMin num = g_min_numeric(A, B, a, b);
        CHECK(rel(num.value, c.value) < 1e-10);
        CHECK(rel(grid_min(A, B, a, b), c.value) < 1e-9);
    }
}

TEST_CASE("upper bound and right-hand side") {
    // offline extended-precision values
    CHECK(rel(seminorm_upper_bound(DimPair(5, 0.5)), 1117.43) < 1e-5);
    CHECK(rel(threshold_rhs(5), 4.6438) < 1e-4);
    CHECK_THROWS_AS(seminorm_upper_bound(DimPair(4, 0.5)), DivergenceError);
    CHECK(seminorm_upper_bound(DimPair(8, 1e-4)) > 100 * seminorm_upper_bound(DimPair(8, 0.5)));
    CHECK(seminorm_upper_bound(DimPair(8, 1 - 1e-4)) > 100 * seminorm_upper_bound(DimPair(8, 0.5)));
}

TEST_CASE("bound chain against quadrature") {
    QuadSpec spec;
    for (int n : {5, 6, 8, 12})
        for (double s : {0.25, 0.5, 0.75}) {
            const double q = gagliardo_direct(radial_bubble(n), n, s, spec).value;
            CHECK(q < seminorm_upper_bound(DimPair(n, s)));
        }
}

TEST_CASE("predicates") {
    QuadSpec spec;
    const Verdict a5 = analytic_predicate(DimPair(5, 0.5));
    CHECK(a5.truth == Truth::False);
    CHECK(analytic_predicate(DimPair(500, 0.5)).truth == Truth::True);
    const ExactVerdict e5 = exact_predicate(DimPair(5, 0.5), spec);
    CHECK(e5.truth == Truth::False);
    CHECK(rel(e5.lhs, 346.343) < 1e-5);
    CHECK_THROWS_AS(exact_predicate(DimPair(3, 0.25), spec), UnreliableValue);
    CHECK(decide(1.0, 0.05) == Truth::True);
    CHECK(decide(1.0, 0.2) == Truth::Indeterminate);
    CHECK(decide(-1.0, 0.01) == Truth::False);
}

TEST_CASE("threshold tables") {
    QuadSpec spec;
    struct Row {
        double s;
        int analytic;
        int exact;
    };
    for (Row r : {Row{0.25, 21, 19}, Row{0.5, 22, 19}, Row{0.75, 24, 20}}) {
        const ThresholdRecord a = threshold_search(r.s, Mode::Analytic, 5, 500, spec, 4);
        REQUIRE(a.n0.has_value());
        CHECK(*a.n0 == r.analytic);
        CHECK_FALSE(a.non_monotone);
        CHECK_FALSE(a.any_error);
        const ThresholdRecord e = threshold_search(r.s, Mode::Exact, 5, 26, spec, 4);
        REQUIRE(e.n0.has_value());
        CHECK(*e.n0 == r.exact);
        CHECK(*e.n0 <= *a.n0);
        for (const BoundReport& b : e.table) {
            REQUIRE(b.status == "ok");
            CHECK(*b.lhs_exact < *b.lhs_analytic);
            if (*b.predicate_analytic == Truth::True) CHECK(*b.predicate_exact == Truth::True);
        }
        // the default cap of 12 stops before the threshold
        CHECK_FALSE(threshold_search(r.s, Mode::Exact, 5, 12, spec, 4).n0.has_value());
    }
    CHECK_THROWS_AS(threshold_search(0.5, Mode::Analytic, 4, 10, spec), DomainError);
    CHECK_THROWS_AS(threshold_search(0.25, Mode::Exact, 3, 10, spec), DomainError);
    const ThresholdRecord low = threshold_search(0.75, Mode::Exact, 3, 4, spec);
    CHECK_FALSE(low.any_error);
}

TEST_CASE("R(N)") {
    for (int n = 5; n <= 500; ++n) {
        const RForms f = r_of_n_forms(n);
        CHECK(rel(f.gamma_form, f.simplified_form) < 1e-10);
    }
    for (int n = 5; n <= 60; ++n) {
        const double S = sobolev_constant(n);
        CHECK(rel(r_of_n(n), bubble_grad_sq(n) / (bubble_l2_sq(n) * S * S)) < 1e-11);
    }
    CHECK(std::abs(r_of_n(400) * M_PI * M_PI * std::exp(2.0) - 1.0) <= 0.01);
    CHECK_THROWS_AS(r_of_n(4), DomainError);
}

TEST_CASE("asymptotic scan") {
    const AsymptoticTable t = asymptotic_scan(500);
    CHECK(t.omega_small_from_80);
    CHECK(t.sobolev_increasing);
    CHECK(t.ratio_decreasing_tail);
    CHECK(t.log10_ratio_last < -300.0);
    CHECK_THROWS_AS(asymptotic_scan(9), DomainError);
}

TEST_CASE("level quotient against 2^{2/N} S_N") {
    QuadSpec spec;
    const DimPair d(30, 0.5);
    double prev = 1e300;
    for (double t : {0.0, 0.3, 0.6, 0.9, 0.999999}) {
        const LevelQuotient v = level_quotient(d, t, Mode::Analytic, spec);
        CHECK(v.quotient < prev);
        prev = v.quotient;
        CHECK(v.below);
    }
    CHECK(rel(prev, sobolev_constant(30)) < 1e-4);
    CHECK_FALSE(level_quotient(DimPair(6, 0.5), 0.0, Mode::Exact, spec).below);
}
