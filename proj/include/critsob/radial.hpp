#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace critsob {

/// Quadrature controls shared by every integral in the library.
struct QuadSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// Optional hard truncation radius; NaN lets the tail bound drive it.
    double r_max = std::numeric_limits<double>::quiet_NaN();
    int max_subdiv = 2000;

    /// Throws DomainError unless rel_tol, abs_tol > 0 and max_subdiv >= 1.
    void validate() const;

    /// Same controls with both tolerances multiplied by `factor`.
    QuadSpec tightened(double factor) const;
};

/// A radial profile u(|x|) on R^N.
///
/// `decay` is the exponent d in |u(r)| ~ r^{-d} at infinity (+inf for compact
/// support or faster-than-algebraic decay). `transform`, when present, is the
/// radial profile of the unitary Fourier transform in dimension
/// `transform_dim`. `breakpoints` lists radii where u or u' is not smooth.
struct RadialFn {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> transform;
    int transform_dim = 0;
    double decay = std::numeric_limits<double>::infinity();
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    std::vector<double> breakpoints;

    bool compact() const { return std::isfinite(support_hi); }
    bool empty_support() const { return !(support_hi > support_lo); }

    /// u'(r) from the oracle, or a central difference when none was given.
    double slope(double r) const;
};

/// exp(-r^2/2) with its exact transform.
RadialFn gaussian_radial(int n);

/// C-infinity bump amplitude * exp(1 - 1/(1 - ((r-c)/w)^2)) supported on
/// [c-w, c+w]; with c = 0 it is a bump on the ball of radius w (peak value = amplitude).
RadialFn smooth_bump(double center, double half_width, double amplitude = 1.0);

/// The zero function.
RadialFn zero_radial();

/// u_k(r) = k^{(N-2)/2} u(k r): the dilation that preserves |grad u|_2 and |u|_{2*}.
RadialFn rescaled(const RadialFn& u, int n, double k);

/// alpha * u.
RadialFn amplified(const RadialFn& u, double alpha);

/// a - b, with merged support and breakpoints.
RadialFn difference(const RadialFn& a, const RadialFn& b);

}  // namespace critsob
