#pragma once

// Quadrature engine for radial functions on R^N: plain radial integrals, the
// singular Gagliardo double integral by two independent routes (direct
// (r, rho) quadrature and the frequency-side integral), cross terms between
// separated radial functions, and Rayleigh-type quotients.

#include <functional>
#include <vector>

#include "critsob/integrate.hpp"
#include "critsob/radial.hpp"

namespace critsob {

/// Scalar radial integrand g(|x|) for radial_integral. `decay` is the
/// exponent of |g(r)| ~ r^{-decay} at infinity.
struct RadialIntegrand {
    std::function<double(double)> fn;
    double decay = std::numeric_limits<double>::infinity();
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    std::vector<double> breakpoints;
};

/// |u|^p and (u')^2 as radial integrands with the decay hints carried over.
RadialIntegrand power_integrand(const RadialFn& u, double p);
RadialIntegrand slope_squared_integrand(const RadialFn& u);

/// Integral over R^N of g(|x|) = omega_{N-1} * int_0^inf r^{N-1} g(r) dr.
/// Throws DivergenceError when the decay hint is <= N.
QuadResult radial_integral(const RadialIntegrand& g, int n, const QuadSpec& spec);

/// |grad u|_2^2 and int |u|^p for a radial profile.
QuadResult gradient_energy(const RadialFn& u, int n, const QuadSpec& spec);
QuadResult power_energy(const RadialFn& u, int n, double p, const QuadSpec& spec);

/// omega_{N-2} int_0^pi sin^{N-2}(th) (1 + t^2 - 2 t cos th)^{-(N+2s)/2} d th for 0 <= t < 1,
/// the angular reduction of |x-y|^{-N-2s} at radii (1, t).
double angular_profile(int n, double s, double t);

/// The same reduction at radii (r, rho): homogeneous of degree -(N+2s).
/// Throws DomainError on the diagonal r == rho.
double angular_kernel(int n, double s, double r, double rho);

/// Relative width of the near-diagonal band 1 - rho/r < kDiagonalBand in
/// which the direct route uses the first-order Taylor surrogate.
inline constexpr double kDiagonalBand = 1e-5;

/// [u]_s^2 by direct quadrature of the (r, rho) double integral.
QuadResult gagliardo_direct(const RadialFn& u, int n, double s, const QuadSpec& spec);

/// The constant tying int_0^inf k^{N-1+2s} |u^(k)|^2 dk to [u]_s^2, fixed by
/// matching both routes on a Gaussian.
struct FourierCalibration {
    int n = 0;
    double s = 0.0;
    double factor = 0.0;
    double error = 0.0;
};

FourierCalibration calibrate_fourier(int n, double s, const QuadSpec& spec);

/// int_0^inf k^{N-1+2s} |u^(k)|^2 dk, using u.transform when present and a
/// numerical Hankel transform for compactly supported u otherwise.
QuadResult frequency_integral(const RadialFn& u, int n, double s, const QuadSpec& spec);

/// Radial profile of the unitary Fourier transform of u at frequency k (numerical).
QuadResult hankel_transform(const RadialFn& u, int n, double k, const QuadSpec& spec);

/// [u]_s^2 by the frequency-side integral. The overload without a calibration
/// calibrates on the spot.
QuadResult gagliardo_fourier(const RadialFn& u, int n, double s, const QuadSpec& spec);
QuadResult gagliardo_fourier(const RadialFn& u, int n, double s, const QuadSpec& spec,
                             const FourierCalibration& cal);

/// iint u_plus(x) u_minus(y) / |x-y|^{N+2s} for nonnegative radial functions
/// whose radial supports are separated by a positive gap.
QuadResult cross_term(const RadialFn& u_plus, const RadialFn& u_minus, int n, double s, const QuadSpec& spec);

struct QuotientReport {
    QuadResult gradient;          // |grad u|_2^2
    QuadResult seminorm;          // [u]_s^2 (zero when omitted)
    QuadResult critical;          // int |u|^{2*}
    double critical_norm_sq = 0;  // |u|_{2*}^2
    double quotient = 0;
    bool nonlocal_included = true;
};

/// (|grad u|^2 + [u]_s^2) / |u|_{2*}^2; with include_nonlocal = false the
/// pure gradient quotient.
QuotientReport mixed_quotient(const RadialFn& u, int n, double s, const QuadSpec& spec,
                              bool include_nonlocal = true);

struct RescaledQuotients {
    std::vector<double> k;
    std::vector<QuotientReport> reports;
    /// [u_k]_s^2 / ([u]_s^2 k^{2s-2}) - 1 for each k.
    std::vector<double> scaling_deviation;
    /// max relative drift of the gradient and L^{2*} parts from their k = 1 values.
    double invariance_drift = 0;
};

/// S(u_k) for u_k(x) = k^{(N-2)/2} u(k x), u compactly supported. Throws
/// ConsistencyError if the gradient or L^{2*} parts drift by more than 1e-6.
RescaledQuotients rescaled_quotient_sequence(const RadialFn& u, int n, double s, const std::vector<double>& ks,
                                             const QuadSpec& spec);

/// Limit of Q(k) = A + B k^{2s-2} from two samples (Richardson step).
double extrapolate_local_limit(double k1, double q1, double k2, double q2, double s);

/// [u]_{s1} / (|u|_2^{1-s1/s2} [u]_{s2}^{s1/s2}) for 0 < s1 < s2 < 1.
double interpolation_ratio(const RadialFn& u, int n, double s1, double s2, const QuadSpec& spec);

/// omega_{N-2} int r^{N-1} int_0^pi f(r, th) sin^{N-2}(th) d th dr for a
/// function of (r, th), th measured from a fixed axis. `theta_breaks(r)`
/// may return interior splits for the inner integral.
QuadResult axisymmetric_integral(const std::function<double(double, double)>& f, int n,
                                 const HalfLineHints& r_hints,
                                 const std::function<std::vector<double>(double)>& theta_breaks,
                                 const QuadSpec& spec);

}  // namespace critsob
