#include "critsob/specfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "critsob/errors.hpp"

namespace critsob {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2k} / (2k (2k-1)) for k = 1..9.
constexpr std::array<double, 9> kStirlingCoeffs = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
};

constexpr double kStirlingThreshold = 10.0;

double stirling_series(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double corr = 0.0;
    double pw = inv;
    for (double c : kStirlingCoeffs) {
        corr += c * pw;
        pw *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + corr;
}

}  // namespace

DimPair::DimPair(int n, double s) : n_(n), s_(s) {
    if (n < 3) throw DomainError("dimension must satisfy N >= 3, got " + std::to_string(n));
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order must lie in (0,1), got " + std::to_string(s));
}

double critical_exponent(int n) {
    if (n < 3) throw DomainError("critical exponent needs N >= 3");
    return 2.0 * n / (n - 2.0);
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma requires a finite positive argument");
    if (x >= kStirlingThreshold) return stirling_series(x);
    // Shift up with Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)).
    double prod = 1.0;
    double y = x;
    while (y < kStirlingThreshold) {
        prod *= y;
        y += 1.0;
    }
    return stirling_series(y) - std::log(prod);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double log_sphere_measure(int n) {
    if (n < 1) throw DomainError("sphere_measure requires n >= 1");
    const double h = 0.5 * (n + 1);
    return std::log(2.0) + h * std::log(kPi) - log_gamma(h);
}

double sphere_measure(int n) { return std::exp(log_sphere_measure(n)); }

SobolevForms sobolev_constant_forms(int n) {
    if (n < 3) throw DomainError("sobolev_constant requires N >= 3");
    const double nd = n;
    const double pre = nd * (nd - 2.0);
    const double gamma_form = pre * kPi * std::exp((2.0 / nd) * (log_gamma(0.5 * nd) - log_gamma(nd)));
    const double sphere_form = 0.25 * pre * std::exp((2.0 / nd) * log_sphere_measure(n));
    return {gamma_form, sphere_form};
}

double sobolev_constant(int n) {
    const auto f = sobolev_constant_forms(n);
    const double rel = std::abs(f.gamma_form - f.sphere_form) / f.sphere_form;
    if (rel > 1e-10) {
        throw ConsistencyError("Sobolev constant closed forms disagree at N=" + std::to_string(n) +
                               " (relative gap " + std::to_string(rel) + ")");
    }
    return f.gamma_form;
}

double log_sobolev_constant(int n) { return std::log(sobolev_constant(n)); }

double duplication_residual(double x) {
    if (!(x > 0.0)) throw DomainError("duplication_residual requires x > 0");
    const double lhs = log_gamma(x) + log_gamma(x + 0.5);
    const double rhs = (1.0 - 2.0 * x) * std::log(2.0) + 0.5 * std::log(kPi) + log_gamma(2.0 * x);
    return std::abs(std::expm1(lhs - rhs));
}

double stirling_ratio(double x) {
    if (!(x > 0.0)) throw DomainError("stirling_ratio requires x > 0");
    const double log_ratio = log_gamma(x + 1.0) - 0.5 * std::log(2.0 * kPi * x) - x * (std::log(x) - 1.0);
    return std::exp(log_ratio);
}

}  // namespace critsob
