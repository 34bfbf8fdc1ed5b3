#include "critsob/bubble.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "critsob/errors.hpp"
#include "critsob/quad.hpp"
#include "critsob/specfn.hpp"

namespace critsob {

void Bubble::validate() const {
    if (dim() < 3) throw DomainError("bubble needs dimension N >= 3");
    if (!(scale > 0.0)) throw DomainError("bubble scale must be positive");
    if (amplitude == 0.0 || !std::isfinite(amplitude)) throw DomainError("bubble amplitude must be nonzero");
}

namespace {

double dist_sq(const Bubble& b, std::span<const double> x) {
    if (x.size() != b.center.size()) throw DomainError("point and bubble dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - b.center[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace

double eval_bubble(const Bubble& b, std::span<const double> x) {
    const int n = b.dim();
    const double q = 1.0 + dist_sq(b, x) / (b.scale * b.scale);
    return b.amplitude * std::pow(b.scale, -0.5 * (n - 2)) * std::pow(q, -0.5 * (n - 2));
}

std::vector<double> bubble_gradient(const Bubble& b, std::span<const double> x) {
    const int n = b.dim();
    const double l2 = b.scale * b.scale;
    const double q = 1.0 + dist_sq(b, x) / l2;
    const double g = -(n - 2) * eval_bubble(b, x) / (q * l2);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = g * (x[i] - b.center[i]);
    return out;
}

void CoronParams::validate() const {
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("Coron parameter t must lie in [0, 1)");
    const double norm = std::sqrt(std::inner_product(sigma.begin(), sigma.end(), sigma.begin(), 0.0));
    if (std::abs(norm - 1.0) > 1e-12) throw DomainError("sigma must be a unit vector");
    if (sigma.size() < 3) throw DomainError("sigma must live in dimension N >= 3");
}

Bubble CoronParams::to_bubble() const {
    validate();
    Bubble b;
    b.center = sigma;
    for (double& c : b.center) c *= t;
    b.scale = 1.0 - t;
    b.amplitude = 1.0;
    return b;
}

double solution_amplitude(int n) {
    if (n < 3) throw DomainError("solution amplitude needs N >= 3");
    return std::pow(static_cast<double>(n) * (n - 2), 0.25 * (n - 2));
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_step_derivative(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    const double da = a / (x * x);
    const double db = -b / ((1.0 - x) * (1.0 - x));
    return (da * b - a * db) / ((a + b) * (a + b));
}

double cutoff_base(double rho) {
    if (rho <= 0.25 || rho >= 4.0) return 0.0;
    if (rho < 0.5) return smooth_step((rho - 0.25) / 0.25);
    if (rho <= 2.0) return 1.0;
    return smooth_step((4.0 - rho) / 2.0);
}

double cutoff_base_derivative(double rho) {
    if (rho <= 0.25 || rho >= 4.0) return 0.0;
    if (rho < 0.5) return smooth_step_derivative((rho - 0.25) / 0.25) / 0.25;
    if (rho <= 2.0) return 0.0;
    return -smooth_step_derivative((4.0 - rho) / 2.0) / 2.0;
}

namespace {
void check_R(double R) {
    if (!(R >= 1.0)) throw DomainError("cutoff radius R must be >= 1");
}
}  // namespace

double cutoff_radial(double R, double r) {
    check_R(R);
    if (r < 1.0 / R) return cutoff_base(R * r);
    if (r < R) return 1.0;
    return cutoff_base(r / R);
}

double cutoff_radial_derivative(double R, double r) {
    check_R(R);
    if (r < 1.0 / R) return R * cutoff_base_derivative(R * r);
    if (r < R) return 0.0;
    return cutoff_base_derivative(r / R) / R;
}

double eval_cutoff(const Cutoff& c, std::span<const double> x) {
    return cutoff_radial(c.R, std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)));
}

double bubble_l2_sq(int n) {
    if (n < 3) throw DomainError("bubble norms need N >= 3");
    if (n <= 4) {
        throw DivergenceError("int u0^2 diverges for N <= 4: the integrand leaves an r^" + std::to_string(3 - n) +
                              " tail");
    }
    return std::exp(log_sphere_measure(n - 1) + log_gamma(0.5 * n - 2.0) + log_gamma(0.5 * n) - std::log(2.0) -
                    log_gamma(n - 2.0));
}

double bubble_lcrit(int n) {
    if (n < 3) throw DomainError("bubble norms need N >= 3");
    return std::exp(log_sphere_measure(n - 1) - n * std::log(2.0) + 0.5 * std::log(M_PI) + log_gamma(0.5 * n) -
                    log_gamma(0.5 * (n + 1.0)));
}

double bubble_grad_sq(int n) {
    return sobolev_constant(n) * std::pow(bubble_lcrit(n), (n - 2.0) / n);
}

double seminorm_scale_factor(double lambda, double s) {
    if (!(lambda > 0.0)) throw DomainError("scale must be positive");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order must lie in (0, 1)");
    return std::pow(lambda, 2.0 - 2.0 * s);
}

RadialFn radial_bubble(int n, double lambda, double amplitude) {
    if (n < 3) throw DomainError("bubble needs N >= 3");
    if (!(lambda > 0.0)) throw DomainError("bubble scale must be positive");
    const double p = 0.5 * (n - 2);
    const double c = amplitude * std::pow(lambda, -p);
    RadialFn u;
    u.value = [p, c, lambda](double r) {
        const double y = r / lambda;
        return c * std::pow(1.0 + y * y, -p);
    };
    u.derivative = [p, c, lambda](double r) {
        const double y = r / lambda;
        return -2.0 * p * c * y / lambda * std::pow(1.0 + y * y, -p - 1.0);
    };
    // u0^(k) = K_1(k) / (k 2^{N/2-2} Gamma(N/2-1)); U[0, lambda]^(k) = lambda^{(N+2)/2} u0^(lambda k).
    const double tc = amplitude * std::pow(lambda, 0.5 * (n + 2)) / (std::pow(2.0, 0.5 * n - 2.0) * gamma_fn(0.5 * n - 1.0));
    u.transform = [tc, lambda](double k) {
        const double q = lambda * k;
        if (q > 700.0) return 0.0;
        return tc * std::cyl_bessel_k(1.0, q) / q;
    };
    u.transform_dim = n;
    u.decay = n - 2;
    u.scale = lambda;
    return u;
}

RadialFn truncated_bubble(int n, double R, double lambda, double amplitude) {
    check_R(R);
    const RadialFn b = radial_bubble(n, lambda, amplitude);
    RadialFn u;
    u.value = [b, R](double r) {
        const double phi = cutoff_radial(R, r);
        return phi == 0.0 ? 0.0 : phi * b.value(r);
    };
    u.derivative = [b, R](double r) {
        return cutoff_radial_derivative(R, r) * b.value(r) + cutoff_radial(R, r) * b.derivative(r);
    };
    u.support_lo = 0.25 / R;
    u.support_hi = 4.0 * R;
    u.scale = lambda;
    u.breakpoints = {0.25 / R, 0.5 / R, 1.0 / R, R, 2.0 * R, 4.0 * R};
    return u;
}

QuadResult truncation_error(int n, const CoronParams& p, double R, const QuadSpec& spec) {
    if (n < 5) throw DomainError("truncation error needs N >= 5 (the L^2 part diverges otherwise)");
    if (static_cast<int>(p.sigma.size()) != n) throw DomainError("sigma must have N components");
    p.validate();
    check_R(R);
    spec.validate();
    const double t = p.t;
    const double lam = 1.0 - t;
    const double e = 0.5 * (n - 2);
    const double amp = std::pow(lam, -e);
    // (r, th) with th the angle to sigma; the bubble center sits at (t, 0).
    auto density = [=](double r, double th) {
        const double c = std::cos(th);
        const double d2 = r * r + t * t - 2.0 * r * t * c;
        const double q = 1.0 + d2 / (lam * lam);
        const double u = amp * std::pow(q, -e);
        const double g = -(n - 2) * u / (q * lam * lam);  // grad u = g (x - z)
        const double radial_part = g * (r - t * c);       // x_hat . grad u
        const double phi = cutoff_radial(R, r);
        const double dphi = cutoff_radial_derivative(R, r);
        const double m = phi - 1.0;
        const double grad_sq = m * m * g * g * d2 + 2.0 * m * u * dphi * radial_part + u * u * dphi * dphi;
        return grad_sq + m * m * u * u;
    };
    HalfLineHints inner;
    inner.support_hi = 0.5 / R;
    inner.scale = 0.5 / R;
    inner.breakpoints = {0.25 / R};
    inner.head_exponent = n - 1;
    HalfLineHints outer;
    outer.support_lo = 2.0 * R;
    outer.scale = 4.0 * R;
    outer.breakpoints = {4.0 * R};
    outer.tail_exponent = n - 3.0;
    QuadResult a = axisymmetric_integral(density, n, inner, nullptr, spec);
    QuadResult b = axisymmetric_integral(density, n, outer, nullptr, spec);
    return a + b;
}

}  // namespace critsob
