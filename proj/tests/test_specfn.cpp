#include <cmath>

#include "critsob/errors.hpp"
#include "critsob/specfn.hpp"
#include "doctest.h"

using namespace critsob;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ln(n!) by direct summation of logs.
double log_factorial(int n) {
    double acc = 0.0;
    for (int k = 2; k <= n; ++k) acc += std::log(static_cast<double>(k));
    return acc;
}
}  // namespace

TEST_CASE("dim pair validation") {
    CHECK_NOTHROW(DimPair(3, 0.5));
    CHECK_THROWS_AS(DimPair(2, 0.5), DomainError);
    CHECK_THROWS_AS(DimPair(3, 0.0), DomainError);
    CHECK_THROWS_AS(DimPair(3, 1.0), DomainError);
    CHECK(DimPair(4, 0.5).two_star() == doctest::Approx(4.0));
}

TEST_CASE("log_gamma small values") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-14);
    CHECK(rel(log_gamma(0.5), 0.5 * std::log(M_PI)) < 1e-13);
    CHECK(rel(log_gamma(11.0), std::log(3628800.0)) < 1e-13);
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("log_gamma against factorials and the libm reference") {
    for (int n = 1; n <= 170; ++n) CHECK(std::abs(log_gamma(n + 1.0) - log_factorial(n)) <= 1e-13 * std::max(1.0, log_factorial(n)));
    for (double x = 0.5; x <= 1000.0; x *= 1.37) {
        const double ref = std::lgamma(x);
        CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)) + 2e-15);
    }
}

TEST_CASE("sphere measure") {
    CHECK(rel(sphere_measure(1), 2.0 * M_PI) < 1e-13);
    CHECK(rel(sphere_measure(2), 4.0 * M_PI) < 1e-13);
    CHECK(rel(sphere_measure(4), 8.0 * M_PI * M_PI / 3.0) < 1e-13);
    CHECK_THROWS_AS(sphere_measure(0), DomainError);
    for (int n = 1; n <= 50; ++n) CHECK(rel(sphere_measure(n + 2) / sphere_measure(n), 2.0 * M_PI / (n + 1)) < 1e-12);
}

TEST_CASE("sobolev constant") {
    // 3 * pi * (Gamma(3/2)/Gamma(3))^{2/3} with Gamma(3/2) = sqrt(pi)/2.
    const double s3 = 3.0 * M_PI * std::pow(std::sqrt(M_PI) / 4.0, 2.0 / 3.0);
    CHECK(rel(sobolev_constant(3), s3) < 1e-13);
    CHECK(std::abs(sobolev_constant(3) - 5.4779) < 1e-3);
    CHECK(rel(sobolev_constant(4), 8.0 * M_PI / std::sqrt(6.0)) < 1e-13);
    for (int n = 3; n <= 500; ++n) {
        const SobolevForms f = sobolev_constant_forms(n);
        CHECK(rel(f.gamma_form, f.sphere_form) < 1e-12);
    }
    CHECK_THROWS_AS(sobolev_constant(2), DomainError);
}

TEST_CASE("duplication and stirling") {
    for (double x : {0.5, 1.0, 2.5, 10.0, 50.0, 200.0}) CHECK(duplication_residual(x) <= 1e-11);
    CHECK(duplication_residual(1.0) <= 1e-13);
    // Gamma(11) / (sqrt(20 pi) (10/e)^10), all factors evaluated directly.
    const double ref = 3628800.0 / (std::sqrt(20.0 * M_PI) * std::pow(10.0 / std::exp(1.0), 10));
    CHECK(rel(stirling_ratio(10.0), ref) < 1e-12);
    CHECK(std::abs(stirling_ratio(100.0) - 1.0) <= 1.0 / 1000.0);
    double prev = stirling_ratio(2.0);
    for (int n = 3; n <= 200; ++n) {
        const double r = stirling_ratio(n);
        CHECK(r < prev);
        CHECK(r >= 1.0);
        prev = r;
    }
    CHECK_THROWS_AS(stirling_ratio(0.0), DomainError);
}
