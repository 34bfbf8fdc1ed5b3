#include "critsob/radial.hpp"

#include <algorithm>
#include <cmath>

#include "critsob/errors.hpp"

namespace critsob {

void QuadSpec::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("QuadSpec.rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw DomainError("QuadSpec.abs_tol must be positive");
    if (max_subdiv < 1) throw DomainError("QuadSpec.max_subdiv must be at least 1");
    if (!std::isnan(r_max) && !(r_max > 0.0)) throw DomainError("QuadSpec.r_max must be positive when set");
}

QuadSpec QuadSpec::tightened(double factor) const {
    QuadSpec q = *this;
    q.rel_tol *= factor;
    q.abs_tol *= factor;
    return q;
}

double RadialFn::slope(double r) const {
    if (derivative) return derivative(r);
    const double h = 1e-6 * std::max(r, scale);
    // Radial profiles are even in r, so u(r - h) = u(|r - h|).
    return (value(r + h) - value(std::abs(r - h))) / (2.0 * h);
}

RadialFn gaussian_radial(int n) {
    RadialFn u;
    u.value = [](double r) { return std::exp(-0.5 * r * r); };
    u.derivative = [](double r) { return -r * std::exp(-0.5 * r * r); };
    u.transform = [](double k) { return std::exp(-0.5 * k * k); };
    u.transform_dim = n;
    return u;
}

RadialFn smooth_bump(double center, double half_width, double amplitude) {
    if (!(half_width > 0.0)) throw DomainError("bump half-width must be positive");
    if (center < 0.0 || (center > 0.0 && center - half_width < 0.0)) {
        throw DomainError("an off-origin bump must lie in r > 0 (center >= half_width)");
    }
    RadialFn u;
    auto shape = [center, half_width, amplitude](double r) {
        const double tau = (r - center) / half_width;
        const double q = 1.0 - tau * tau;
        if (q <= 0.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / q);
    };
    u.value = shape;
    u.derivative = [shape, center, half_width](double r) {
        const double tau = (r - center) / half_width;
        const double q = 1.0 - tau * tau;
        if (q <= 0.0) return 0.0;
        return shape(r) * (-2.0 * tau / (q * q)) / half_width;
    };
    u.support_lo = std::max(0.0, center - half_width);
    u.support_hi = center + half_width;
    u.scale = half_width;
    u.breakpoints = {u.support_lo, center, u.support_hi};
    return u;
}

RadialFn zero_radial() {
    RadialFn u;
    u.value = [](double) { return 0.0; };
    u.derivative = [](double) { return 0.0; };
    u.transform = [](double) { return 0.0; };
    u.support_lo = 0.0;
    u.support_hi = 0.0;
    return u;
}

RadialFn rescaled(const RadialFn& u, int n, double k) {
    if (!(k > 0.0)) throw DomainError("rescaling factor must be positive");
    RadialFn v = u;
    const double amp = std::pow(k, 0.5 * (n - 2));
    v.value = [f = u.value, amp, k](double r) { return amp * f(k * r); };
    if (u.derivative) v.derivative = [f = u.derivative, amp, k](double r) { return amp * k * f(k * r); };
    if (u.transform) {
        const double tamp = std::pow(k, -0.5 * (n + 2));
        v.transform = [f = u.transform, tamp, k](double q) { return tamp * f(q / k); };
    }
    v.support_lo = u.support_lo / k;
    v.support_hi = u.support_hi / k;
    v.scale = u.scale / k;
    for (double& b : v.breakpoints) b /= k;
    return v;
}

RadialFn amplified(const RadialFn& u, double alpha) {
    RadialFn v = u;
    v.value = [f = u.value, alpha](double r) { return alpha * f(r); };
    if (u.derivative) v.derivative = [f = u.derivative, alpha](double r) { return alpha * f(r); };
    if (u.transform) v.transform = [f = u.transform, alpha](double q) { return alpha * f(q); };
    return v;
}

RadialFn difference(const RadialFn& a, const RadialFn& b) {
    if (b.empty_support()) return a;
    if (a.empty_support()) return amplified(b, -1.0);
    RadialFn v;
    v.value = [fa = a.value, fb = b.value](double r) { return fa(r) - fb(r); };
    if (a.derivative && b.derivative) {
        v.derivative = [fa = a.derivative, fb = b.derivative](double r) { return fa(r) - fb(r); };
    }
    if (a.transform && b.transform && a.transform_dim == b.transform_dim) {
        v.transform = [fa = a.transform, fb = b.transform](double q) { return fa(q) - fb(q); };
        v.transform_dim = a.transform_dim;
    }
    v.decay = std::min(a.decay, b.decay);
    v.support_lo = std::min(a.support_lo, b.support_lo);
    v.support_hi = std::max(a.support_hi, b.support_hi);
    v.scale = std::min(a.scale, b.scale);
    v.breakpoints = a.breakpoints;
    v.breakpoints.insert(v.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end());
    for (double e : {a.support_lo, a.support_hi, b.support_lo, b.support_hi})
        if (e > 0.0 && std::isfinite(e)) v.breakpoints.push_back(e);
    std::sort(v.breakpoints.begin(), v.breakpoints.end());
    v.breakpoints.erase(std::unique(v.breakpoints.begin(), v.breakpoints.end()), v.breakpoints.end());
    return v;
}

}  // namespace critsob
