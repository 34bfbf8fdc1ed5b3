#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace critsob {

/// A quadrature estimate with its error bound.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

inline QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }

/// Scales value and error by |c| (the sign of c applies to value only).
QuadResult scaled(QuadResult r, double c);

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (21-point) over [pts.front(), pts.back()], with the
/// interior points used as initial splits. Never throws on non-convergence:
/// the flag in the result reports it. Summation order is fixed (left to right).
QuadResult integrate_adaptive(const Integrand& f, std::span<const double> pts, double rel_tol,
                              double abs_tol, int max_subdiv);

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                              int max_subdiv);

/// Shape information for integrals over (0, inf).
struct HalfLineHints {
    double scale = 1.0;  // where the integrand does its interesting work
    std::vector<double> breakpoints;
    double support_lo = 0.0;  // integrand is zero below
    double support_hi = std::numeric_limits<double>::infinity();  // and above
    /// f(x) ~ x^{-tail_exponent} as x -> inf; NaN when unknown. Must exceed 1.
    double tail_exponent = std::numeric_limits<double>::quiet_NaN();
    /// f(x) ~ x^{head_exponent} as x -> 0; NaN when unknown. Must exceed -1.
    double head_exponent = std::numeric_limits<double>::quiet_NaN();
    /// Window integrated before any decade extension; NaN means scale*1e-2 / scale*1e2.
    double core_lo = std::numeric_limits<double>::quiet_NaN();
    double core_hi = std::numeric_limits<double>::quiet_NaN();
};

/// Integral of f over (0, inf) computed in the variable y = ln x. A core window
/// around hints.scale is integrated first and then extended one decade at a
/// time in each unbounded direction until the next decade and the analytic
/// tail bound fall below the tolerance. Tail bounds are added to the error.
///
/// Throws DivergenceError when the exponent hints imply divergence or when the
/// decade contributions stop shrinking, and ToleranceNotMet when a panel hits
/// the subdivision cap or the decade budget runs out.
QuadResult integrate_half_line(const Integrand& f, const HalfLineHints& hints, double rel_tol, double abs_tol,
                               int max_subdiv);

}  // namespace critsob
