#include <chrono>
#include <cmath>
#include <cstdio>

#include "critsob/errors.hpp"
#include "critsob/quad.hpp"
#include "critsob/specfn.hpp"
#include "doctest.h"

using namespace critsob;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// u0 = (1 + r^2)^{-(N-2)/2} with its derivative, built by hand.
RadialFn u0(int n) {
    RadialFn u;
    const double p = 0.5 * (n - 2);
    u.value = [p](double r) { return std::pow(1.0 + r * r, -p); };
    u.derivative = [p](double r) { return -2.0 * p * r * std::pow(1.0 + r * r, -p - 1.0); };
    u.decay = n - 2;
    return u;
}

// N = 3 kernel in closed form.
double kernel3(double s, double r, double rho) {
    const double e = 1.0 + 2.0 * s;
    return (std::pow(std::abs(r - rho), -e) - std::pow(r + rho, -e)) * 2.0 * M_PI / (e * r * rho);
}
}  // namespace

TEST_CASE("radial integral basics") {
    QuadSpec spec;
    RadialIntegrand ind;
    ind.fn = [](double) { return 1.0; };
    ind.support_hi = 1.0;
    CHECK(rel(radial_integral(ind, 3, spec).value, 4.0 * M_PI / 3.0) < 1e-10);

    const RadialFn u = u0(4);
    CHECK(rel(power_energy(u, 4, 4.0, spec).value, M_PI * M_PI / 6.0) < 1e-8);
    CHECK_THROWS_AS(power_energy(u, 4, 2.0, spec), DivergenceError);
    // omega_3 * 4 int r^5 (1+r^2)^{-4} dr = 2 pi^2 * 4 / 12
    CHECK(rel(gradient_energy(u, 4, spec).value, 4.0 * M_PI * M_PI / 3.0) < 1e-8);
}

TEST_CASE("angular kernel") {
    CHECK(rel(angular_kernel(3, 0.5, 1.0, 2.0), (8.0 / 9.0) * (M_PI / 2.0)) < 1e-11);
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9})
        for (double rho : {1e-3, 0.3, 0.9, 0.999, 0.99999, 1.001, 3.0, 50.0})
            CHECK(rel(angular_kernel(3, s, 1.0, rho), kernel3(s, 1.0, rho)) < 1e-10);
    CHECK(angular_kernel(5, 0.5, 1.0, 2.0) == angular_kernel(5, 0.5, 2.0, 1.0));
    CHECK_THROWS_AS(angular_kernel(5, 0.5, 1.0, 1.0), DomainError);
}

TEST_CASE("gaussian seminorm and calibration constant") {
    QuadSpec spec;
    for (int n : {3, 4, 5, 6})
        for (double s : {0.25, 0.5, 0.75}) {
            // [g]^2 = omega_{N-1} pi^{N/2} Gamma(1-s) / (s 4^s) for g = exp(-r^2/2).
            const double exact = sphere_measure(n - 1) * std::pow(M_PI, 0.5 * n) * gamma_fn(1.0 - s) /
                                 (s * std::pow(4.0, s));
            const auto t0 = std::chrono::steady_clock::now();
            const QuadResult d = gagliardo_direct(gaussian_radial(n), n, s, spec);
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            MESSAGE("N=" << n << " s=" << s << " rel=" << rel(d.value, exact) << " err=" << d.error << " ms=" << ms);
            CHECK(rel(d.value, exact) < 1e-7);
            // kappa = 2 omega_{N-1} / C(N,s), C = s 4^s Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s))
            const double c = s * std::pow(4.0, s) * gamma_fn(0.5 * (n + 2.0 * s)) /
                             (std::pow(M_PI, 0.5 * n) * gamma_fn(1.0 - s));
            const FourierCalibration cal = calibrate_fourier(n, s, spec);
            CHECK(rel(cal.factor, 2.0 * sphere_measure(n - 1) / c) < 1e-7);
        }
}

TEST_CASE("interpolation ratio") {
    QuadSpec spec;
    const int n = 3;
    const double s1 = 0.3, s2 = 0.7, theta = s1 / s2;
    // Hoelder on the frequency side: ratio^2 <= c(s1) / c(s2)^theta, with [u]_s^2 = c(s) int |xi|^{2s} |u^|^2
    const double w = sphere_measure(n - 1);
    const double c1 = calibrate_fourier(n, s1, spec).factor / w;
    const double c2 = calibrate_fourier(n, s2, spec).factor / w;
    const double cap = std::sqrt(c1 / std::pow(c2, theta));
    double best = 0.0;
    for (auto [center, width] : {std::pair{0.0, 1.0}, {0.0, 0.5}, {1.0, 0.5}, {2.0, 0.3}, {0.5, 0.25}}) {
        const RadialFn u = smooth_bump(center, width);
        const double r = interpolation_ratio(u, n, s1, s2, spec);
        CHECK(r > 0.0);
        CHECK(r < cap);
        best = std::max(best, r);
        CHECK(rel(interpolation_ratio(amplified(u, 3.0), n, s1, s2, spec), r) < 1e-6);
        CHECK(rel(interpolation_ratio(rescaled(u, n, 2.5), n, s1, s2, spec), r) < 1e-6);
    }
    MESSAGE("largest ratio " << best << " against the frequency-side cap " << cap);
    CHECK_THROWS_AS(interpolation_ratio(smooth_bump(0.0, 1.0), n, 0.7, 0.3, spec), DomainError);
    CHECK_THROWS_AS(interpolation_ratio(zero_radial(), n, s1, s2, spec), DomainError);
}

TEST_CASE("rescaled quotient sequence") {
    QuadSpec spec;
    // a compact bump, independent of the bubble code
    const RadialFn u = smooth_bump(0.0, 1.0);
    for (int n : {3, 4})
        for (double s : {0.25, 0.75}) {
            const RescaledQuotients r = rescaled_quotient_sequence(u, n, s, {1, 2, 4, 8}, spec);
            CHECK(r.invariance_drift < 1e-8);
            for (std::size_t i = 0; i < r.k.size(); ++i) {
                CHECK(std::abs(r.scaling_deviation[i]) < 1e-6);
                if (i) CHECK(r.reports[i].quotient < r.reports[i - 1].quotient);
                CHECK(r.reports[i].quotient > sobolev_constant(n));
            }
            // Q(k) = A + B k^{2s-2} exactly, so any two samples recover A
            const double a = mixed_quotient(u, n, s, spec, false).quotient;
            CHECK(rel(extrapolate_local_limit(1, r.reports[0].quotient, 2, r.reports[1].quotient, s), a) < 1e-6);
            CHECK(rel(extrapolate_local_limit(4, r.reports[2].quotient, 8, r.reports[3].quotient, s), a) < 1e-6);
        }
    CHECK_THROWS_AS(rescaled_quotient_sequence(gaussian_radial(3), 3, 0.5, {1, 2}, spec), DomainError);
    CHECK_THROWS_AS(extrapolate_local_limit(2, 1.0, 2, 1.0, 0.5), DomainError);
}
