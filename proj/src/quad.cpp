#include "critsob/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "critsob/errors.hpp"
#include "critsob/specfn.hpp"

namespace critsob {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order must lie in (0, 1)");
}

void check_dimension(int n) {
    if (n < 1) throw DomainError("dimension must be at least 1");
}

// [u]_s^2 < inf requires r^{N-1} r^{-2d} r^{-2s} integrable at infinity.
void check_seminorm_finite(const RadialFn& u, int n, double s) {
    if (u.compact() || !std::isfinite(u.decay)) return;
    const double excess = 2.0 * u.decay + 2.0 * s - n;
    if (excess <= 0.0) {
        throw DivergenceError("seminorm diverges: decay r^-" + std::to_string(u.decay) + " gives 2d + 2s - N = " +
                              std::to_string(excess) + " <= 0");
    }
}

HalfLineHints hints_of(const RadialFn& u) {
    HalfLineHints h;
    h.scale = u.scale;
    h.breakpoints = u.breakpoints;
    h.support_lo = u.support_lo;
    h.support_hi = u.support_hi;
    return h;
}

double second_derivative(const RadialFn& u, double r) {
    const double h = 1e-4 * std::max(r, u.scale);
    const double lo = r > h ? u.slope(r - h) : -u.slope(h - r);
    return (u.slope(r + h) - lo) / (2.0 * h);
}

QuadResult require(const QuadResult& r, const std::string& what) {
    if (!r.converged) throw ToleranceNotMet(what + " did not reach the requested tolerance", r.value, r.error);
    return r;
}

}  // namespace

RadialIntegrand power_integrand(const RadialFn& u, double p) {
    RadialIntegrand g;
    g.fn = [f = u.value, p](double r) { return std::pow(std::abs(f(r)), p); };
    g.decay = p * u.decay;
    g.support_lo = u.support_lo;
    g.support_hi = u.support_hi;
    g.scale = u.scale;
    g.breakpoints = u.breakpoints;
    return g;
}

RadialIntegrand slope_squared_integrand(const RadialFn& u) {
    RadialIntegrand g;
    g.fn = [u](double r) {
        const double d = u.slope(r);
        return d * d;
    };
    g.decay = 2.0 * (u.decay + 1.0);
    g.support_lo = u.support_lo;
    g.support_hi = u.support_hi;
    g.scale = u.scale;
    g.breakpoints = u.breakpoints;
    return g;
}

QuadResult radial_integral(const RadialIntegrand& g, int n, const QuadSpec& spec) {
    check_dimension(n);
    spec.validate();
    if (!(g.support_hi > g.support_lo)) return {};
    if (!std::isfinite(g.support_hi) && std::isfinite(g.decay) && g.decay <= n) {
        throw DivergenceError("radial integral diverges: integrand ~ r^-" + std::to_string(g.decay) +
                              " leaves an r^" + std::to_string(n - 1 - g.decay) + " tail in dimension " +
                              std::to_string(n));
    }
    HalfLineHints h;
    h.scale = g.scale;
    h.breakpoints = g.breakpoints;
    h.support_lo = g.support_lo;
    h.support_hi = g.support_hi;
    if (std::isfinite(g.decay)) h.tail_exponent = g.decay - (n - 1);
    h.head_exponent = n - 1;

    double cut_tail = 0.0;
    if (!std::isnan(spec.r_max) && spec.r_max < h.support_hi) {
        h.support_hi = spec.r_max;
        if (std::isfinite(g.decay)) {
            cut_tail = std::abs(g.fn(spec.r_max)) * std::pow(spec.r_max, n) / (g.decay - n);
        }
    }
    auto f = [&g, n](double r) { return std::pow(r, n - 1) * g.fn(r); };
    QuadResult res = integrate_half_line(f, h, spec.rel_tol, spec.abs_tol, spec.max_subdiv);
    res.error += cut_tail;
    return scaled(res, sphere_measure(n - 1));
}

QuadResult gradient_energy(const RadialFn& u, int n, const QuadSpec& spec) {
    return radial_integral(slope_squared_integrand(u), n, spec);
}

QuadResult power_energy(const RadialFn& u, int n, double p, const QuadSpec& spec) {
    return radial_integral(power_integrand(u, p), n, spec);
}

namespace {

// Angular reduction parameterized by the gap e = 1 - t, so that t -> 1 keeps full precision.
double angular_profile_gap(int n, double s, double e) {
    const double t = 1.0 - e;
    const double p = 0.5 * (n + 2.0 * s);
    auto f = [n, t, e, p](double y) {
        const double th = std::exp(y);
        const double half = std::sin(0.5 * th);
        const double base = e * e + 4.0 * t * half * half;
        const double sn = std::sin(th);
        if (sn <= 0.0) return 0.0;
        return std::exp((n - 2) * std::log(sn) - p * std::log(base)) * th;
    };
    const double th_lo = std::min(1e-3, 1e-6 * e);
    std::vector<double> pts = {std::log(th_lo)};
    for (double b : {0.1 * e, e, 10.0 * e, 1.0})
        if (b > th_lo && b < M_PI) pts.push_back(std::log(b));
    pts.push_back(std::log(M_PI));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    QuadResult r = integrate_adaptive(f, pts, 1e-13, kTiny, 2000);
    // Below th_lo the integrand is th^{N-2} e^{-2p} to leading order.
    const double head = std::pow(th_lo, n - 1) / (n - 1) * std::pow(e, -2.0 * p);
    return sphere_measure(n - 2) * (r.value + head);
}

}  // namespace

double angular_profile(int n, double s, double t) {
    if (n < 2) throw DomainError("angular reduction needs N >= 2");
    check_order(s);
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("angular profile needs 0 <= t < 1");
    if (t == 0.0) return sphere_measure(n - 1);
    return angular_profile_gap(n, s, 1.0 - t);
}

double angular_kernel(int n, double s, double r, double rho) {
    if (!(r > 0.0 && rho > 0.0)) throw DomainError("angular kernel needs positive radii");
    if (r == rho) throw DomainError("angular kernel is singular on the diagonal r == rho");
    const double hi = std::max(r, rho);
    const double lo = std::min(r, rho);
    return std::pow(hi, -(n + 2.0 * s)) * angular_profile(n, s, lo / hi);
}

namespace {

// G(t) = int_0^inf r^{N-1-2s} (u(r) - u(r t))^2 dr for 0 < t < 1.
double shell_difference(const RadialFn& u, int n, double s, double t, double rel, double abs) {
    HalfLineHints h = hints_of(u);
    for (double b : u.breakpoints)
        if (b > 0.0) h.breakpoints.push_back(b / t);
    std::sort(h.breakpoints.begin(), h.breakpoints.end());
    if (u.compact()) {
        h.support_hi = u.support_hi / t;
        h.core_hi = h.support_hi;
    } else {
        h.core_hi = u.scale * 1e2 / t;
        if (std::isfinite(u.decay)) h.tail_exponent = 2.0 * u.decay + 2.0 * s + 1.0 - n;
    }
    h.support_lo = u.support_lo;
    const double pw = n - 1.0 - 2.0 * s;
    auto f = [&u, t, pw](double r) {
        const double d = u.value(r) - u.value(r * t);
        return std::pow(r, pw) * d * d;
    };
    return integrate_half_line(f, h, rel, abs, 4000).value;
}

// int r^{N+1-2s} u'^2 and int r^{N+2-2s} |u' u''| over (0, inf).
QuadResult slope_moment(const RadialFn& u, int n, double s, bool with_curvature, double rel, double abs) {
    HalfLineHints h = hints_of(u);
    if (!u.compact() && std::isfinite(u.decay)) h.tail_exponent = 2.0 * u.decay + 2.0 * s + 1.0 - n;
    if (with_curvature) {
        const double pw = n + 2.0 - 2.0 * s;
        auto f = [&u, pw](double r) { return std::pow(r, pw) * std::abs(u.slope(r) * second_derivative(u, r)); };
        return integrate_half_line(f, h, rel, abs, 4000);
    }
    const double pw = n + 1.0 - 2.0 * s;
    auto f = [&u, pw](double r) {
        const double d = u.slope(r);
        return std::pow(r, pw) * d * d;
    };
    return integrate_half_line(f, h, rel, abs, 4000);
}

}  // namespace

QuadResult gagliardo_direct(const RadialFn& u, int n, double s, const QuadSpec& spec) {
    const DimPair dim(n, s);
    spec.validate();
    if (u.empty_support()) return {};
    check_seminorm_finite(u, n, s);

    const double rel_in = std::max(1e-13, 0.05 * spec.rel_tol);
    const double abs_in = kTiny;
    const double m_head = 1.0 / (2.0 * s);
    const double m_tail = 1.0 / (2.0 - 2.0 * s);
    const double delta = kDiagonalBand;

    auto body = [&](double t) {
        return std::pow(t, n - 1) * angular_profile(n, s, t) * shell_difference(u, n, s, t, rel_in, abs_in);
    };
    // t = v^{1/(2s)} / 2 flattens the t^{2s-1} behavior at t = 0.
    auto head = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double t = 0.5 * std::pow(v, m_head);
        return body(t) * 0.5 * m_head * std::pow(v, m_head - 1.0);
    };
    // 1 - t = w^{1/(2-2s)} flattens the (1-t)^{1-2s} behavior at t = 1.
    auto near = [&](double w) {
        const double t = 1.0 - std::pow(w, m_tail);
        return body(t) * m_tail * std::pow(w, m_tail - 1.0);
    };
    const double w_mid = std::pow(0.5, 2.0 - 2.0 * s);
    const double w_band = std::pow(delta, 2.0 - 2.0 * s);

    QuadResult a = require(integrate_adaptive(head, 0.0, 1.0, spec.rel_tol, spec.abs_tol, spec.max_subdiv),
                           "seminorm (far-from-diagonal part)");
    QuadResult b = require(integrate_adaptive(near, w_band, w_mid, spec.rel_tol, spec.abs_tol, spec.max_subdiv),
                           "seminorm (near-diagonal part)");

    // Band 1 - rho/r < delta: (u(r) - u(rt))^2 ~ r^2 (1-t)^2 u'(r)^2.
    auto band_weight = [&](double w, int power) {
        if (w <= 0.0) return 0.0;
        const double e = std::pow(w, m_tail);
        const double t = 1.0 - e;
        return std::pow(t, n - 1) * angular_profile_gap(n, s, e) * std::pow(e, power) * m_tail * std::pow(w, m_tail - 1.0);
    };
    const QuadResult j2 = integrate_adaptive([&](double w) { return band_weight(w, 2); }, 0.0, w_band, 1e-10, kTiny, 200);
    const QuadResult j3 = integrate_adaptive([&](double w) { return band_weight(w, 3); }, 0.0, w_band, 1e-6, kTiny, 200);
    const QuadResult g2 = slope_moment(u, n, s, false, rel_in, abs_in);
    const QuadResult e3 = slope_moment(u, n, s, true, 1e-4, abs_in);
    QuadResult band;
    band.value = j2.value * g2.value;
    band.error = j2.error * g2.value + j2.value * g2.error + 2.0 * j3.value * e3.value;
    band.evaluations = j2.evaluations + j3.evaluations + g2.evaluations + e3.evaluations;

    QuadResult total = a + b + band;
    return scaled(total, 2.0 * sphere_measure(n - 1));
}

QuadResult hankel_transform(const RadialFn& u, int n, double k, const QuadSpec& spec) {
    check_dimension(n);
    if (u.empty_support()) return {};
    if (!u.compact()) throw UnsupportedInput("numerical Hankel transform needs a compactly supported profile");
    if (k < 0.0) throw DomainError("frequency must be nonnegative");
    const double nu = 0.5 * n - 1.0;
    const double lo = u.support_lo;
    const double hi = u.support_hi;
    if (k * hi < 1e-8) {
        const double c = 1.0 / (std::pow(2.0, nu) * gamma_fn(nu + 1.0));
        auto f = [&u, n](double r) { return u.value(r) * std::pow(r, n - 1); };
        std::vector<double> pts = {lo};
        for (double b : u.breakpoints)
            if (b > lo && b < hi) pts.push_back(b);
        pts.push_back(hi);
        return scaled(integrate_adaptive(f, pts, 0.1 * spec.rel_tol, kTiny, spec.max_subdiv), c);
    }
    std::vector<double> pts = {lo};
    const double step = M_PI / k;
    const int pieces = static_cast<int>(std::min(4000.0, std::ceil((hi - lo) / step)));
    for (int i = 1; i < pieces; ++i) pts.push_back(lo + (hi - lo) * i / pieces);
    for (double b : u.breakpoints)
        if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double half = 0.5 * n;
    auto f = [&u, k, nu, half](double r) { return u.value(r) * std::cyl_bessel_j(nu, k * r) * std::pow(r, half); };
    QuadResult r = integrate_adaptive(f, pts, 0.1 * spec.rel_tol, kTiny, spec.max_subdiv);
    // Below the roundoff floor the transform is indistinguishable from zero.
    if (std::abs(r.value) <= r.error) {
        r.value = 0.0;
    }
    return scaled(r, std::pow(k, 1.0 - half));
}

QuadResult frequency_integral(const RadialFn& u, int n, double s, const QuadSpec& spec) {
    const DimPair dim(n, s);
    spec.validate();
    if (u.empty_support()) return {};
    check_seminorm_finite(u, n, s);
    const bool exact = u.transform && u.transform_dim == n;
    if (!exact && !u.compact()) {
        throw UnsupportedInput("frequency-side seminorm needs a known transform or compact support");
    }
    HalfLineHints h;
    h.scale = 1.0 / u.scale;
    if (std::isfinite(u.decay) && u.decay < n && !u.compact()) {
        h.head_exponent = 2.0 * u.decay + 2.0 * s - n - 1.0;
        if (h.head_exponent <= -1.0) {
            throw DivergenceError("frequency-side integrand behaves like k^" + std::to_string(h.head_exponent) +
                                  " at the origin");
        }
    } else {
        h.head_exponent = n - 1.0 + 2.0 * s;
    }
    const double pw = n - 1.0 + 2.0 * s;
    std::function<double(double)> uhat;
    if (exact) {
        uhat = u.transform;
    } else {
        uhat = [&u, n, spec](double k) { return hankel_transform(u, n, k, spec).value; };
    }
    auto f = [&uhat, pw](double k) {
        const double v = uhat(k);
        return std::pow(k, pw) * v * v;
    };
    return integrate_half_line(f, h, spec.rel_tol, spec.abs_tol, spec.max_subdiv);
}

FourierCalibration calibrate_fourier(int n, double s, const QuadSpec& spec) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, double>, FourierCalibration> cache;
    const auto key = std::make_tuple(n, s, spec.rel_tol);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const RadialFn g = gaussian_radial(n);
    const QuadSpec tight = spec.tightened(0.1);
    const QuadResult direct = gagliardo_direct(g, n, s, tight);
    const QuadResult freq = frequency_integral(g, n, s, tight);
    FourierCalibration cal;
    cal.n = n;
    cal.s = s;
    cal.factor = direct.value / freq.value;
    cal.error = cal.factor * (direct.error / direct.value + freq.error / freq.value);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, cal);
    return cal;
}

QuadResult gagliardo_fourier(const RadialFn& u, int n, double s, const QuadSpec& spec) {
    return gagliardo_fourier(u, n, s, spec, calibrate_fourier(n, s, spec));
}

QuadResult gagliardo_fourier(const RadialFn& u, int n, double s, const QuadSpec& spec, const FourierCalibration& cal) {
    if (cal.n != n || cal.s != s) throw DomainError("calibration was made for a different (N, s)");
    QuadResult f = frequency_integral(u, n, s, spec);
    QuadResult out = scaled(f, cal.factor);
    if (f.value != 0.0) out.error += std::abs(f.value) * cal.error;
    return out;
}

QuadResult cross_term(const RadialFn& u_plus, const RadialFn& u_minus, int n, double s, const QuadSpec& spec) {
    const DimPair dim(n, s);
    spec.validate();
    if (u_plus.empty_support() || u_minus.empty_support()) return {};
    const bool plus_inside = u_plus.support_hi < u_minus.support_lo;
    const bool minus_inside = u_minus.support_hi < u_plus.support_lo;
    if (!plus_inside && !minus_inside) {
        throw UnsupportedInput("cross term needs radial supports separated by a positive gap");
    }
    const double rel_in = 0.1 * spec.rel_tol;
    const double abs_in = 0.1 * spec.abs_tol;
    HalfLineHints inner = hints_of(u_minus);
    if (!u_minus.compact() && std::isfinite(u_minus.decay)) inner.tail_exponent = u_minus.decay + 2.0 * s + 1.0;
    HalfLineHints outer = hints_of(u_plus);
    if (!u_plus.compact() && std::isfinite(u_plus.decay)) outer.tail_exponent = u_plus.decay + 2.0 * s + 1.0;
    auto profile = [&](double r) {
        const double up = u_plus.value(r);
        if (up == 0.0) return 0.0;
        auto g = [&, r](double rho) { return u_minus.value(rho) * std::pow(rho, n - 1) * angular_kernel(n, s, r, rho); };
        const QuadResult q = integrate_half_line(g, inner, rel_in, abs_in, spec.max_subdiv);
        return up * std::pow(r, n - 1) * q.value;
    };
    QuadResult res = integrate_half_line(profile, outer, spec.rel_tol, spec.abs_tol, spec.max_subdiv);
    return scaled(res, sphere_measure(n - 1));
}

QuotientReport mixed_quotient(const RadialFn& u, int n, double s, const QuadSpec& spec, bool include_nonlocal) {
    const DimPair dim(n, s);
    QuotientReport q;
    q.nonlocal_included = include_nonlocal;
    q.gradient = gradient_energy(u, n, spec);
    if (include_nonlocal) q.seminorm = gagliardo_direct(u, n, s, spec);
    q.critical = power_energy(u, n, dim.two_star(), spec);
    if (!(q.critical.value > 0.0)) throw DomainError("quotient undefined for the zero function");
    q.critical_norm_sq = std::pow(q.critical.value, 2.0 / dim.two_star());
    q.quotient = (q.gradient.value + q.seminorm.value) / q.critical_norm_sq;
    return q;
}

RescaledQuotients rescaled_quotient_sequence(const RadialFn& u, int n, double s, const std::vector<double>& ks,
                                             const QuadSpec& spec) {
    if (!u.compact()) throw DomainError("rescaled quotient sequence needs a compactly supported profile");
    RescaledQuotients out;
    const QuotientReport base = mixed_quotient(u, n, s, spec);
    for (double k : ks) {
        if (!(k > 0.0)) throw DomainError("rescaling factors must be positive");
        const QuotientReport rep = k == 1.0 ? base : mixed_quotient(rescaled(u, n, k), n, s, spec);
        const double dg = std::abs(rep.gradient.value / base.gradient.value - 1.0);
        const double dc = std::abs(rep.critical.value / base.critical.value - 1.0);
        out.invariance_drift = std::max({out.invariance_drift, dg, dc});
        out.scaling_deviation.push_back(rep.seminorm.value / (base.seminorm.value * std::pow(k, 2.0 * s - 2.0)) - 1.0);
        out.k.push_back(k);
        out.reports.push_back(rep);
    }
    if (out.invariance_drift > 1e-6) {
        throw ConsistencyError("gradient or critical part changed under the critical dilation (drift " +
                               std::to_string(out.invariance_drift) + ")");
    }
    return out;
}

double extrapolate_local_limit(double k1, double q1, double k2, double q2, double s) {
    check_order(s);
    if (!(k1 > 0.0 && k2 > 0.0) || k1 == k2) throw DomainError("extrapolation needs two distinct positive k");
    const double rho = std::pow(k2 / k1, 2.0 * s - 2.0);
    return (q2 - rho * q1) / (1.0 - rho);
}

double interpolation_ratio(const RadialFn& u, int n, double s1, double s2, const QuadSpec& spec) {
    check_order(s1);
    check_order(s2);
    if (!(s1 < s2)) throw DomainError("interpolation ratio needs s1 < s2");
    const double theta = s1 / s2;
    const double l2 = power_energy(u, n, 2.0, spec).value;
    const double a = gagliardo_direct(u, n, s1, spec).value;
    const double b = gagliardo_direct(u, n, s2, spec).value;
    if (!(l2 > 0.0 && b > 0.0)) throw DomainError("interpolation ratio undefined for the zero function");
    return std::sqrt(a) / (std::pow(l2, 0.5 * (1.0 - theta)) * std::pow(b, 0.5 * theta));
}

QuadResult axisymmetric_integral(const std::function<double(double, double)>& f, int n,
                                 const HalfLineHints& r_hints,
                                 const std::function<std::vector<double>(double)>& theta_breaks,
                                 const QuadSpec& spec) {
    if (n < 2) throw DomainError("axisymmetric reduction needs N >= 2");
    const double rel_in = 0.1 * spec.rel_tol;
    const double abs_in = 0.1 * spec.abs_tol;
    auto radial = [&](double r) {
        std::vector<double> pts = {0.0};
        if (theta_breaks) {
            for (double b : theta_breaks(r))
                if (b > 0.0 && b < M_PI) pts.push_back(b);
        }
        pts.push_back(M_PI);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto g = [&f, r, n](double th) { return f(r, th) * std::pow(std::sin(th), n - 2); };
        const QuadResult q = integrate_adaptive(g, pts, rel_in, abs_in * std::pow(std::max(r, 1.0), 1 - n),
                                                spec.max_subdiv);
        if (!q.converged) throw ToleranceNotMet("angular integral did not converge", q.value, q.error);
        return std::pow(r, n - 1) * q.value;
    };
    return scaled(integrate_half_line(radial, r_hints, spec.rel_tol, spec.abs_tol, spec.max_subdiv),
                  sphere_measure(n - 2));
}

}  // namespace critsob
