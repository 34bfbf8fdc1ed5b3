#pragma once

// Special functions and dimension-dependent constants. Every Gamma-function
// evaluation goes through log_gamma so that dimensions up to several hundred
// neither overflow nor underflow.

namespace critsob {

/// Ambient dimension N >= 3 together with a fractional order s in (0,1).
class DimPair {
public:
    DimPair(int n, double s);

    int n() const noexcept { return n_; }
    double s() const noexcept { return s_; }

    /// Critical Sobolev exponent 2N/(N-2).
    double two_star() const noexcept { return 2.0 * n_ / (n_ - 2.0); }

private:
    int n_;
    double s_;
};

/// Critical exponent 2N/(N-2) for N >= 3.
double critical_exponent(int n);

/// ln Gamma(x) for x > 0. Shifted Stirling series, about 15 significant digits.
double log_gamma(double x);

/// Gamma(x) = exp(log_gamma(x)); overflows for x beyond ~171.
double gamma_fn(double x);

/// Surface measure of the unit sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_measure(int n);
double log_sphere_measure(int n);

/// The two closed forms of the sharp Sobolev constant.
struct SobolevForms {
    double gamma_form;   // N(N-2) pi (Gamma(N/2)/Gamma(N))^{2/N}
    double sphere_form;  // N(N-2)/4 * omega_N^{2/N}
};

SobolevForms sobolev_constant_forms(int n);

/// Sharp constant S_N of |grad u|_2^2 >= S_N |u|_{2*}^2. Cross-checks both
/// closed forms and throws ConsistencyError if they drift apart by more than 1e-10.
double sobolev_constant(int n);
double log_sobolev_constant(int n);

/// |lhs - rhs| / rhs for Gamma(x) Gamma(x + 1/2) = 2^{1-2x} sqrt(pi) Gamma(2x), in log space.
double duplication_residual(double x);

/// Gamma(x+1) / (sqrt(2 pi x) (x/e)^x), in log space.
double stirling_ratio(double x);

}  // namespace critsob
