#include <chrono>
#include <cmath>
#include <vector>

#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/quad.hpp"
#include "critsob/specfn.hpp"
#include "doctest.h"

using namespace critsob;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> e1(int n, double a = 1.0) {
    std::vector<double> v(n, 0.0);
    v[0] = a;
    return v;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

TEST_CASE("bubble evaluation") {
    Bubble b{std::vector<double>(4, 0.0), 1.0, 1.0};
    CHECK(eval_bubble(b, std::vector<double>(4, 0.0)) == 1.0);
    CHECK(eval_bubble(b, e1(4)) == doctest::Approx(0.5).epsilon(1e-15));
    CoronParams p{0.6, e1(5)};
    const Bubble c = p.to_bubble();
    CHECK(rel(eval_bubble(c, e1(5, 0.6)), std::pow(0.4, -1.5)) < 1e-14);
    CHECK_THROWS_AS((CoronParams{1.0, e1(5)}.to_bubble()), DomainError);
    CHECK_THROWS_AS((CoronParams{0.5, e1(5, 1.0001)}.to_bubble()), DomainError);
    CHECK_THROWS_AS((Bubble{e1(4), 0.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((Bubble{e1(4), 1.0, 0.0}.validate()), DomainError);

    // gradient against central differences
    Bubble g{{0.1, -0.2, 0.3}, 0.7, 1.3};
    std::vector<double> x = {0.4, 0.5, -0.1};
    const auto grad = bubble_gradient(g, x);
    for (int i = 0; i < 3; ++i) {
        auto xp = x, xm = x;
        xp[i] += 1e-6;
        xm[i] -= 1e-6;
        CHECK(std::abs(grad[i] - (eval_bubble(g, xp) - eval_bubble(g, xm)) / 2e-6) < 1e-7);
    }
}

TEST_CASE("closed-form bubble norms") {
    QuadSpec spec;
    CHECK(rel(bubble_l2_sq(5), std::pow(M_PI, 3) / 2.0) < 1e-13);
    CHECK_THROWS_AS(bubble_l2_sq(4), DivergenceError);
    CHECK(rel(bubble_lcrit(4), M_PI * M_PI / 6.0) < 1e-13);
    CHECK(rel(bubble_grad_sq(4), 4.0 * M_PI * M_PI / 3.0) < 1e-12);
    CHECK(rel(bubble_grad_sq(4), sobolev_constant(4) * std::sqrt(M_PI * M_PI / 6.0)) < 1e-12);
    for (int n = 3; n <= 8; ++n) {
        const RadialFn u = radial_bubble(n);
        const double two_star = critical_exponent(n);
        CHECK(rel(power_energy(u, n, two_star, spec).value, bubble_lcrit(n)) < 1e-8);
        CHECK(rel(gradient_energy(u, n, spec).value, bubble_grad_sq(n)) < 1e-8);
        if (n >= 5) CHECK(rel(power_energy(u, n, 2.0, spec).value, bubble_l2_sq(n)) < 1e-8);
    }
}

TEST_CASE("transform of u0 matches the numerical Hankel transform of a truncation") {
    QuadSpec spec;
    for (int n : {5, 7}) {
        const RadialFn u = radial_bubble(n);
        const RadialFn cut = truncated_bubble(n, 1e3);
        for (double k : {0.5, 1.0, 3.0}) {
            const double a = u.transform(k);
            const double b = hankel_transform(cut, n, k, spec).value;
            CHECK(rel(b, a) < 1e-3);
        }
    }
}

TEST_CASE("cutoff family") {
    Cutoff c{10.0};
    CHECK(eval_cutoff(c, e1(3, 1.0)) == 1.0);
    CHECK(eval_cutoff(c, e1(3, 45.0)) == 0.0);
    CHECK(eval_cutoff(c, e1(3, 0.02)) == 0.0);
    double prev = 0.0;
    for (double r = 0.025; r <= 0.05; r += 1e-4) {
        const double v = cutoff_radial(10.0, r);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
    prev = 1.0;
    for (double r = 20.0; r <= 40.0; r += 0.05) {
        const double v = cutoff_radial(10.0, r);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    for (double r : {0.03, 0.04, 25.0, 33.0}) {
        const double fd = (cutoff_radial(10.0, r * (1 + 1e-7)) - cutoff_radial(10.0, r * (1 - 1e-7))) / (2e-7 * r);
        CHECK(std::abs(cutoff_radial_derivative(10.0, r) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("seminorm of u0: dual methods, golden values, scaling") {
    QuadSpec spec;
    // reference values computed offline in extended precision
    struct Ref {
        int n;
        double s;
        double value;
    };
    for (Ref r : {Ref{5, 0.5, 346.343}, Ref{4, 0.75, 293.32}, Ref{3, 0.75, 241.26}}) {
        const QuadResult d = gagliardo_direct(radial_bubble(r.n), r.n, r.s, spec);
        CHECK(rel(d.value, r.value) < 2e-5);
    }
    for (int n : {3, 4, 5, 6})
        for (double s : {0.25, 0.5, 0.75}) {
            const RadialFn u = radial_bubble(n);
            if (n + 2.0 * s <= 4.0) {
                CHECK_THROWS_AS(gagliardo_direct(u, n, s, spec), DivergenceError);
                CHECK_THROWS_AS(gagliardo_fourier(u, n, s, spec), DivergenceError);
                continue;
            }
            const auto t0 = std::chrono::steady_clock::now();
            const double d = gagliardo_direct(u, n, s, spec).value;
            const double ms = elapsed_ms(t0);
            const double f = gagliardo_fourier(u, n, s, spec).value;
            MESSAGE("N=" << n << " s=" << s << " direct=" << d << " fourier=" << f << " rel=" << rel(d, f)
                         << " direct_ms=" << ms);
            CHECK(rel(d, f) < 1e-6);
            for (double lam : {0.5, 2.0}) {
                const double dl = gagliardo_direct(radial_bubble(n, lam), n, s, spec).value;
                CHECK(rel(dl / d, seminorm_scale_factor(lam, s)) < 1e-6);
            }
        }
}

TEST_CASE("truncation error decreases with R") {
    QuadSpec spec;
    const int n = 5;
    const double energy = bubble_grad_sq(n) + bubble_l2_sq(n);
    double prev = 1e300;
    for (double R : {10.0, 30.0, 100.0}) {
        double worst = 0.0;
        for (double t : {0.0, 0.25, 0.5, 0.75, 0.9}) {
            const auto t0 = std::chrono::steady_clock::now();
            const QuadResult q = truncation_error(n, CoronParams{t, e1(n)}, R, spec);
            MESSAGE("R=" << R << " t=" << t << " err=" << q.value << " +- " << q.error << " ms=" << elapsed_ms(t0));
            worst = std::max(worst, q.value);
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 0.01 * energy);
    CHECK_THROWS_AS(truncation_error(4, CoronParams{0.0, e1(4)}, 10.0, spec), DomainError);
}
