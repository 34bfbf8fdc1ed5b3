#include <cmath>
#include <vector>

#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/ledger.hpp"
#include "critsob/quad.hpp"
#include "doctest.h"

using namespace critsob;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Bubble ground(int n, double lam, std::vector<double> z = {}) {
    if (z.empty()) z.assign(n, 0.0);
    return Bubble{z, lam, solution_amplitude(n)};
}
}  // namespace

TEST_CASE("single-bubble level") {
    QuadSpec spec;
    const double s3 = sobolev_constant(3);
    CHECK(rel(bubble_energy(3), std::pow(s3, 1.5) / 3.0) < 1e-14);
    CHECK(std::abs(bubble_energy(3) - 4.2736) < 1e-4);
    CHECK(rel(bubble_energy(4), 8.0 * M_PI * M_PI / 3.0) < 1e-13);
    for (int n : {3, 4, 5}) CHECK(rel(bubble_energy_quadrature(n, spec).value, bubble_energy(n)) < 1e-5);
    for (int n : {3, 4, 5, 8}) {
        CHECK(solution_residual(n, solution_amplitude(n)) < 1e-4);
        CHECK(solution_residual(n, 1.0) > 0.1);
    }
}

TEST_CASE("energies of general functions") {
    QuadSpec spec;
    const DimPair d(3, 0.5);
    CHECK(energy_local(zero_radial(), d, spec).total == 0.0);
    CHECK(energy_infty(zero_radial(), 3, spec).value == 0.0);
    const RadialFn bump = smooth_bump(0.0, 1.0, 2.0);
    const EnergyReport e = energy_local(bump, d, spec);
    CHECK(rel(e.total, energy_infty(bump, 3, spec).value + 0.5 * gagliardo_direct(bump, 3, 0.5, spec).value) < 1e-10);
    CHECK(std::abs(e.total - (e.quadratic - e.mass - e.critical)) < 1e-12);
    const EnergyReport m = energy_local(bump, d, spec, 2.0);
    CHECK(rel(m.mass, power_energy(bump, 3, 2.0, spec).value) < 1e-12);
    // energy_infty of any rescaled solution-normalized bubble is the same
    for (double lam : {0.1, 1.0, 7.0})
        CHECK(rel(energy_infty(radial_bubble(4, lam, solution_amplitude(4)), 4, spec).value, bubble_energy(4)) < 1e-6);
}

TEST_CASE("level arithmetic") {
    QuadSpec spec;
    CHECK(ps_level(ProfileSet{}, 3) == 0.0);
    ProfileSet two{0.0, {ground(3, 0.1), ground(3, 2.0, {5, 0, 0})}, 0.0};
    CHECK(ps_level(two, 3) == 2.0 * bubble_energy(3));
    CHECK(std::abs(ps_level(two, 3) - 8.5473) < 1e-3);
    CHECK(rel(ps_level_quadrature(two, 3, spec).value, 2.0 * bubble_energy(3)) < 1e-5);
    ProfileSet one{1.25, {ground(5, 0.3)}, 0.0};
    CHECK(ps_level(one, 5) == 1.25 + bubble_energy(5));
    // a unit-amplitude bubble is not a critical point: its energy comes from the closed forms
    ProfileSet unit{0.0, {Bubble{std::vector<double>(4, 0.0), 1.0, 1.0}}, 0.0};
    CHECK(rel(ps_level(unit, 4), 0.5 * bubble_grad_sq(4) - 0.25 * bubble_lcrit(4)) < 1e-14);
    CHECK(rel(ps_level_quadrature(unit, 4, spec).value, ps_level(unit, 4)) < 1e-6);

    for (int n = 3; n <= 20; ++n) {
        const auto [lo, hi] = coron_window(n);
        CHECK(lo == bubble_energy(n));
        CHECK(hi == 2.0 * lo);
    }
    const auto [lo, hi] = coron_window(3);
    CHECK(std::abs(lo - 4.2736) < 1e-4);
    CHECK(std::abs(hi - 8.5473) < 1e-3);
    const double eps = 1e-3;
    CHECK((lo < bubble_energy(3) + eps && bubble_energy(3) + eps < hi));
    CHECK_FALSE(2.0 * bubble_energy(3) < hi);
}

TEST_CASE("separation statistic") {
    const Bubble a{{0, 0, 0}, 1.0, 1.0};
    CHECK(separation_stat(a, a) == 0.0);
    const Bubble b{{0, 0, 0}, std::exp(2.0), 1.0};
    CHECK(separation_stat(a, b) == doctest::Approx(2.0).epsilon(1e-14));
    const Bubble c{{3, 0, 0}, 1.0, 1.0};
    CHECK(separation_stat(a, c) == 3.0);
    const Bubble d{{3, 0, 0}, 2.0, 1.0};
    CHECK(separation_stat(a, d) != separation_stat(d, a));
}

TEST_CASE("cross term and the sign-split identity") {
    QuadSpec spec;
    const RadialFn inner = smooth_bump(0.0, 1.0);
    CHECK(cross_term(inner, zero_radial(), 3, 0.5, spec).value == 0.0);
    double prev = 1e300;
    for (double gap : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double v = cross_term(inner, smooth_bump(1.0 + gap + 0.5, 0.5), 3, 0.5, spec).value;
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(cross_term(inner, smooth_bump(1.2, 0.5), 3, 0.5, spec), UnsupportedInput);

    const DimPair d(3, 0.5);
    const RadialFn outer = smooth_bump(2.5, 0.5);
    const IdentityReport r = sign_changing_identity(inner, outer, d, spec);
    MESSAGE("direct=" << r.direct << " split=" << r.split << " cross=" << r.cross << " residual=" << r.residual);
    CHECK(r.residual <= 1e-3);
    // cross term by the reverse assignment
    CHECK(rel(cross_term(outer, inner, 3, 0.5, spec).value, r.cross) < 1e-7);
    const IdentityReport z = sign_changing_identity(inner, zero_radial(), d, spec);
    CHECK(z.residual <= 1e-8);
    const IdentityReport a = sign_changing_identity(amplified(inner, 0.3), amplified(outer, 0.3), d, spec);
    CHECK(a.residual <= 1e-3);
    CHECK_THROWS_AS(sign_changing_identity(inner, smooth_bump(1.2, 0.5), d, spec), UnsupportedInput);
}

TEST_CASE("center of mass") {
    QuadSpec spec;
    const Bubble b{{0.3, -0.2, 0.1, 0.0}, 0.5, 1.0};
    CHECK(center_of_mass(b, INFINITY, spec) == b.center);
    const auto f0 = center_of_mass(Bubble{std::vector<double>(5, 0.0), 0.7, 1.0}, 10.0, spec);
    for (double v : f0) CHECK(std::abs(v) < 1e-12);
    // off-origin bubble under the radial cutoff: F lies on the axis through z
    const std::vector<double> z = {0.3, 0.4, 0.0, 0.0, 0.0};
    double prev = 1e300;
    for (double lam : {0.1, 0.03, 0.01, 0.003}) {
        const auto f = center_of_mass(Bubble{z, lam, 1.0}, 10.0, spec);
        CHECK(std::abs(f[0] * 0.4 - f[1] * 0.3) < 1e-12);
        const double err = std::hypot(f[0] - z[0], f[1] - z[1]);
        MESSAGE("lambda=" << lam << " |F - z|=" << err);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}
