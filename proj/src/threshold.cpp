#include "critsob/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/parallel.hpp"
#include "critsob/quad.hpp"

namespace critsob {

namespace {

void check_gmin_args(double A, double B, double a, double b) {
    if (!(A > 0.0 && B > 0.0 && a > 0.0 && b > 0.0)) throw DomainError("g_min needs positive A, B, a, b");
}

// Relative margin (rhs - lhs) / max(lhs, rhs) from ln(rhs / lhs).
double relative_margin(double log_ratio) {
    return log_ratio >= 0.0 ? -std::expm1(-log_ratio) : std::expm1(log_ratio);
}

double log_bubble_l2(int n) {
    return log_sphere_measure(n - 1) + log_gamma(0.5 * n - 2.0) + log_gamma(0.5 * n) - std::log(2.0) -
           log_gamma(n - 2.0);
}

double log_bubble_lcrit(int n) {
    return log_sphere_measure(n - 1) - n * std::log(2.0) + 0.5 * std::log(M_PI) + log_gamma(0.5 * n) -
           log_gamma(0.5 * (n + 1.0));
}

double log_bubble_grad(int n) { return log_sobolev_constant(n) + (n - 2.0) / n * log_bubble_lcrit(n); }

double log_bound_prefactor(const DimPair& d) {
    const double s = d.s();
    return log_sphere_measure(d.n() - 1) - s * std::log(2.0) - std::log(s * (1.0 - s));
}

double log_rhs_factor(int n) { return std::log(std::expm1(2.0 / n * std::log(2.0))); }

void require_n5(int n) {
    if (n < 5) {
        throw DivergenceError("the interpolation bound needs int u0^2 < inf, i.e. N >= 5 (r^" +
                              std::to_string(3 - n) + " tail)");
    }
}

}  // namespace

GMin g_min_numeric(double A, double B, double a, double b) {
    check_gmin_args(A, B, a, b);
    auto h = [=](double y) { return A * std::exp(-a * y) + B * std::exp(b * y); };
    // h is convex in y = ln l: expand a bracket around 0, then golden-section.
    double lo = -1.0, hi = 1.0;
    while (h(lo) < h(lo + 0.5 * (hi - lo)) && lo > -700.0) lo -= 2.0 * (hi - lo);
    while (h(hi) < h(hi - 0.5 * (hi - lo)) && hi < 700.0) hi += 2.0 * (hi - lo);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 400 && (hi - lo) > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = h(x2);
        }
    }
    const double y = 0.5 * (lo + hi);
    return {std::exp(y), h(y)};
}

GMin g_min(double A, double B, double a, double b) {
    check_gmin_args(A, B, a, b);
    const double sum = a + b;
    const double value = (std::pow(b / a, a / sum) + std::pow(a / b, b / sum)) * std::pow(A, b / sum) *
                         std::pow(B, a / sum);
    const double ell = std::pow(a * A / (b * B), 1.0 / sum);
    const GMin num = g_min_numeric(A, B, a, b);
    if (std::abs(num.value - value) > 1e-10 * value) {
        throw ConsistencyError("g_min closed form and numerical minimum disagree");
    }
    return {ell, value};
}

double seminorm_upper_bound(const DimPair& dim) {
    const int n = dim.n();
    const double s = dim.s();
    require_n5(n);
    const double v = std::exp(log_bound_prefactor(dim) + (1.0 - s) * log_bubble_l2(n) + s * log_bubble_grad(n));
    // The same number as omega_{N-1}/2 times the minimum of g with A = 2|u0|^2/s, B = |grad u0|^2/(1-s).
    if (std::isnormal(v) && n <= 150) {
        const GMin m = g_min(2.0 * bubble_l2_sq(n) / s, bubble_grad_sq(n) / (1.0 - s), 2.0 * s, 2.0 - 2.0 * s);
        const double w = 0.5 * sphere_measure(n - 1) * m.value;
        if (std::abs(w - v) > 1e-10 * v) throw ConsistencyError("upper bound and its g_min assembly disagree");
    }
    return v;
}

double threshold_rhs(int n) { return std::exp(log_rhs_factor(n) + log_bubble_grad(n)); }

const char* to_string(Truth t) {
    switch (t) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        default: return "indeterminate";
    }
}

const char* to_string(Mode m) { return m == Mode::Analytic ? "analytic" : "exact"; }

Truth decide(double margin, double error) {
    if (margin > 10.0 * error) return Truth::True;
    if (margin < -10.0 * error) return Truth::False;
    return Truth::Indeterminate;
}

Verdict analytic_predicate(const DimPair& dim) {
    const int n = dim.n();
    const double s = dim.s();
    require_n5(n);
    const double lg = log_bubble_grad(n);
    const double ll = log_bubble_l2(n);
    const double pre = log_bound_prefactor(dim);
    const double rf = log_rhs_factor(n);

    // bound < rhs
    const double log_lhs = pre + (1.0 - s) * ll + s * lg;
    const double log_rhs = rf + lg;
    const double m1 = log_rhs - log_lhs;
    // [prefactor / (2^{2/N} - 1)]^{1/(1-s)} <= |grad u0|^2 / |u0|_2^2
    const double lhs2 = (pre - rf) / (1.0 - s);
    const double m2 = (lg - ll) - lhs2;
    // the same with |grad u0|^2 / |u0|_2^2 = R(N) S_N^2
    const double m3 = (std::log(r_of_n(n)) + 2.0 * log_sobolev_constant(n)) - lhs2;

    const double scale = std::max({1.0, std::abs(log_lhs), std::abs(log_rhs), std::abs(lhs2)});
    const double err = 1e-12 * scale;
    if (std::abs(m1 / (1.0 - s) - m2) > 10.0 * err / (1.0 - s) || std::abs(m2 - m3) > 10.0 * err / (1.0 - s)) {
        throw ConsistencyError("equivalent forms of the sufficient condition disagree");
    }
    const Truth t1 = decide(m1, err);
    if (t1 != decide(m2, err / (1.0 - s)) || t1 != decide(m3, err / (1.0 - s))) {
        throw ConsistencyError("equivalent forms of the sufficient condition reach different verdicts");
    }
    Verdict v;
    v.lhs = std::exp(log_lhs);
    v.rhs = std::exp(log_rhs);
    v.margin = relative_margin(m1);
    v.error = err;
    v.truth = decide(v.margin, v.error);
    return v;
}

ExactVerdict exact_predicate(const DimPair& dim, const QuadSpec& spec) {
    const int n = dim.n();
    const double s = dim.s();
    const RadialFn u = radial_bubble(n);
    QuadResult d, f;
    try {
        d = gagliardo_direct(u, n, s, spec);
        f = gagliardo_fourier(u, n, s, spec);
    } catch (const DivergenceError& e) {
        throw UnreliableValue(std::string("seminorm of u0 is not finite: ") + e.what());
    }
    const double gap = std::abs(d.value - f.value) / f.value;
    if (gap > 1e-2) throw UnreliableValue("direct and frequency-side seminorms differ by " + std::to_string(gap));
    ExactVerdict v;
    v.direct = d.value;
    v.fourier = f.value;
    v.lhs = d.value;
    v.rhs = threshold_rhs(n);
    const double big = std::max(v.lhs, v.rhs);
    v.margin = (v.rhs - v.lhs) / big;
    v.error = std::max({std::abs(d.value - f.value), d.error, f.error}) / big;
    v.truth = decide(v.margin, v.error);
    return v;
}

BoundReport bound_report(const DimPair& dim, Mode mode, const QuadSpec& spec) {
    BoundReport r;
    r.n = dim.n();
    r.s = dim.s();
    try {
        r.rhs = threshold_rhs(r.n);
        if (r.n >= 5) {
            const Verdict a = analytic_predicate(dim);
            r.lhs_analytic = a.lhs;
            r.predicate_analytic = a.truth;
            r.margin_analytic = a.margin;
            r.error_estimate = a.error;
        } else if (mode == Mode::Analytic) {
            require_n5(r.n);
        }
        if (mode == Mode::Exact) {
            const ExactVerdict e = exact_predicate(dim, spec);
            r.lhs_exact = e.lhs;
            r.predicate_exact = e.truth;
            r.margin_exact = e.margin;
            r.error_estimate = e.error;
            if (r.lhs_analytic && !(e.lhs < *r.lhs_analytic)) {
                throw ConsistencyError("quadrature seminorm exceeds the analytic upper bound");
            }
        }
    } catch (const std::exception& e) {
        r.status = e.what();
    }
    return r;
}

ThresholdRecord threshold_search(double s, Mode mode, int n_lo, int n_hi, const QuadSpec& spec, unsigned threads) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order must lie in (0, 1)");
    if (n_hi < n_lo) throw DomainError("empty dimension range");
    if (mode == Mode::Analytic && n_lo < 5) throw DomainError("analytic mode needs N_lo >= 5");
    if (mode == Mode::Exact && !(n_lo + 2.0 * s > 4.0)) throw DomainError("exact mode needs N_lo + 2s > 4");
    ThresholdRecord rec;
    rec.s = s;
    rec.mode = mode;
    rec.n_lo = n_lo;
    rec.n_hi = n_hi;
    rec.table.resize(static_cast<std::size_t>(n_hi - n_lo + 1));
    parallel_for(rec.table.size(), threads, [&](std::size_t i) {
        rec.table[i] = bound_report(DimPair(n_lo + static_cast<int>(i), s), mode, spec);
    });
    std::vector<bool> holds;
    for (const BoundReport& b : rec.table) {
        if (b.status != "ok") rec.any_error = true;
        const auto& p = mode == Mode::Analytic ? b.predicate_analytic : b.predicate_exact;
        holds.push_back(b.status == "ok" && p && *p == Truth::True);
    }
    for (int i = static_cast<int>(holds.size()) - 1; i >= 0 && holds[i]; --i) rec.n0 = n_lo + i;
    bool seen_hold = false, seen_fail_after = false;
    for (bool h : holds) {
        if (h && seen_fail_after) rec.non_monotone = true;
        if (h) seen_hold = true;
        if (!h && seen_hold) seen_fail_after = true;
    }
    return rec;
}

RForms r_of_n_forms(int n) {
    if (n < 5) throw DomainError("R(N) needs N >= 5");
    const double N = n;
    const double ln2 = std::log(2.0), lnpi = std::log(M_PI);
    const double a = (3.0 - 2.0 / N - N) * ln2 + (-1.5 - 1.0 / N) * lnpi + log_gamma(N - 2.0) +
                     (2.0 / N) * (log_gamma(N) - log_gamma(0.5 * N)) +
                     (-1.0 + 2.0 / N) * log_gamma(0.5 * (N + 1.0)) - std::log(N * (N - 2.0)) -
                     log_gamma(0.5 * N - 2.0);
    const double b = std::log(4.0) - 2.0 * lnpi + std::log((N - 4.0) / (N - 2.0)) - (4.0 / N) * ln2 -
                     (2.0 / N) * lnpi + (4.0 / N) * log_gamma(0.5 * (N + 1.0)) - std::log(N * (N - 1.0));
    return {std::exp(a), std::exp(b)};
}

double r_of_n(int n) {
    const RForms f = r_of_n_forms(n);
    if (std::abs(f.gamma_form - f.simplified_form) > 1e-10 * f.simplified_form) {
        throw ConsistencyError("the two forms of R(N) disagree at N = " + std::to_string(n));
    }
    return f.gamma_form;
}

AsymptoticTable asymptotic_scan(int n_hi, double s) {
    if (n_hi < 10) throw DomainError("asymptotic scan needs N_hi >= 10");
    const DimPair check(5, s);
    AsymptoticTable t;
    t.s = s;
    for (int n = 3; n <= n_hi; ++n) {
        AsymptoticRow row;
        row.n = n;
        const double lo = log_sphere_measure(n - 1) - log_rhs_factor(n);
        row.omega_ratio = std::exp(lo);
        row.log10_omega_ratio = lo / std::log(10.0);
        row.sobolev = sobolev_constant(n);
        row.bound_ratio = std::numeric_limits<double>::quiet_NaN();
        row.log10_bound_ratio = std::numeric_limits<double>::quiet_NaN();
        if (n >= 5) {
            const DimPair d(n, s);
            const double lhs = (log_bound_prefactor(d) - log_rhs_factor(n)) / (1.0 - s);
            const double lr = lhs - (log_bubble_grad(n) - log_bubble_l2(n));
            row.bound_ratio = std::exp(lr);
            row.log10_bound_ratio = lr / std::log(10.0);
        }
        t.rows.push_back(row);
    }
    t.omega_small_from_80 = true;
    t.sobolev_increasing = true;
    t.ratio_decreasing_tail = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const AsymptoticRow& r = t.rows[i];
        if (r.n >= 80 && !(r.log10_omega_ratio < -6.0)) t.omega_small_from_80 = false;
        if (i > 0 && !(r.sobolev > t.rows[i - 1].sobolev)) t.sobolev_increasing = false;
        if (i > 0 && t.rows[i - 1].n >= std::max(5, n_hi / 2) && !(r.log10_bound_ratio < t.rows[i - 1].log10_bound_ratio)) {
            t.ratio_decreasing_tail = false;
        }
    }
    t.log10_ratio_last = t.rows.back().log10_bound_ratio;
    return t;
}

LevelQuotient level_quotient(const DimPair& dim, double t, Mode mode, const QuadSpec& spec) {
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("t must lie in [0, 1)");
    const int n = dim.n();
    const double s = dim.s();
    const double semi = mode == Mode::Analytic ? seminorm_upper_bound(dim)
                                               : gagliardo_direct(radial_bubble(n), n, s, spec).value;
    LevelQuotient v;
    v.quotient = (bubble_grad_sq(n) + std::pow(1.0 - t, 2.0 - 2.0 * s) * semi) /
                 std::pow(bubble_lcrit(n), (n - 2.0) / n);
    v.level = std::pow(2.0, 2.0 / n) * sobolev_constant(n);
    v.below = v.quotient < v.level;
    return v;
}

}  // namespace critsob
