#include "critsob/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "critsob/errors.hpp"

namespace critsob {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478326, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double floor;  // roundoff floor of the error estimate
};

Panel gk21(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * kEps * resabs;
    err = std::max(err, floor);
    if (!std::isfinite(value)) {
        throw DivergenceError("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return {a, b, value, err, floor};
}

// Neumaier-compensated sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

}  // namespace

QuadResult scaled(QuadResult r, double c) {
    r.value *= c;
    r.error *= std::abs(c);
    return r;
}

QuadResult integrate_adaptive(const Integrand& f, std::span<const double> pts, double rel_tol, double abs_tol,
                              int max_subdiv) {
    QuadResult out;
    if (pts.size() < 2) return out;

    auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
    std::vector<Panel> done;  // panels too narrow to split further

    double total = 0.0;
    double total_err = 0.0;
    double total_floor = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        Panel p = gk21(f, pts[i], pts[i + 1]);
        out.evaluations += 21;
        total += p.value;
        total_err += p.error;
        total_floor += p.floor;
        queue.push(p);
    }

    int splits = 0;
    auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
    while (!queue.empty() && total_err > target() && total_err > 2.0 * total_floor) {
        if (splits >= max_subdiv) break;
        Panel p = queue.top();
        queue.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 64.0 * kEps * std::max(std::abs(p.a), std::abs(p.b))) {
            done.push_back(p);
            continue;
        }
        Panel l = gk21(f, p.a, mid);
        Panel r = gk21(f, mid, p.b);
        out.evaluations += 42;
        ++splits;
        total += l.value + r.value - p.value;
        total_err += l.error + r.error - p.error;
        total_floor += l.floor + r.floor - p.floor;
        queue.push(l);
        queue.push(r);
    }

    while (!queue.empty()) {
        done.push_back(queue.top());
        queue.pop();
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    CompensatedSum v;
    CompensatedSum e;
    CompensatedSum fl;
    for (const Panel& p : done) {
        v.add(p.value);
        e.add(p.error);
        fl.add(p.floor);
    }
    out.value = v.total();
    out.error = e.total();
    out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value)) || out.error <= 2.0 * fl.total();
    return out;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                              int max_subdiv) {
    const std::array<double, 2> pts = {a, b};
    return integrate_adaptive(f, pts, rel_tol, abs_tol, max_subdiv);
}

namespace {

constexpr int kMaxDecades = 80;

QuadResult log_panel(const Integrand& f, double lo, double hi, const std::vector<double>& breaks, double rel_tol,
                     double abs_tol, int max_subdiv) {
    std::vector<double> pts;
    pts.push_back(std::log(lo));
    for (double b : breaks)
        if (b > lo && b < hi) pts.push_back(std::log(b));
    pts.push_back(std::log(hi));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto g = [&f](double y) {
        const double x = std::exp(y);
        return f(x) * x;
    };
    QuadResult r = integrate_adaptive(g, pts, rel_tol, abs_tol, max_subdiv);
    if (!r.converged) {
        throw ToleranceNotMet("half-line panel [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "] did not converge",
                              r.value, r.error);
    }
    return r;
}

// Walks decades away from the core in one direction. `outward` maps a
// decade index to the panel bounds.
QuadResult extend(const Integrand& f, const HalfLineHints& h, bool upward, double start, double limit,
                  double core_value, double rel_tol, double abs_tol, int max_subdiv) {
    QuadResult acc;
    acc.value = 0.0;
    const double exponent = upward ? h.tail_exponent : h.head_exponent;
    double prev_piece = std::numeric_limits<double>::quiet_NaN();
    int growth_run = 0;
    int flat_run = 0;
    double edge = start;
    for (int d = 0; d < kMaxDecades; ++d) {
        double next = upward ? edge * 10.0 : edge / 10.0;
        bool last = false;
        if (upward && next >= limit) {
            next = limit;
            last = true;
        }
        if (!upward && next <= limit) {
            next = limit;
            last = true;
        }
        const double lo = upward ? edge : next;
        const double hi = upward ? next : edge;
        // Decade panels only need accuracy relative to the running total.
        const double piece_abs = std::max(abs_tol, 0.1 * rel_tol * std::abs(core_value + acc.value));
        QuadResult piece = log_panel(f, lo, hi, h.breakpoints, rel_tol, piece_abs, max_subdiv);
        const double before = std::abs(core_value + acc.value);
        acc += piece;
        edge = next;
        if (last) return acc;

        const double now = std::abs(core_value + acc.value);
        const double mag = std::abs(piece.value);
        // Running total growing by >= 1.5x per decade for 4 decades: power-law divergence.
        growth_run = (before > 0.0 && now >= 1.5 * before) ? growth_run + 1 : 0;
        // Decade contributions not shrinking for 8 decades: logarithmic divergence.
        flat_run = (std::isfinite(prev_piece) && mag > 0.0 && mag >= 0.97 * prev_piece) ? flat_run + 1 : 0;
        if (growth_run >= 4 || flat_run >= 8) {
            throw DivergenceError(std::string("integral diverges at ") + (upward ? "infinity" : "the origin") +
                                  " (decade contributions do not decay)");
        }

        double tail;
        const double fx = std::abs(f(edge)) * edge;
        if (std::isfinite(exponent)) {
            const double rate = upward ? exponent - 1.0 : exponent + 1.0;
            tail = fx / rate;
        } else if (std::isfinite(prev_piece) && prev_piece > 0.0 && mag < prev_piece) {
            const double q = mag / prev_piece;
            tail = mag * q / (1.0 - q);
        } else {
            tail = std::numeric_limits<double>::infinity();
        }
        prev_piece = mag;
        const double target = 0.1 * std::max(abs_tol, rel_tol * now);
        if (tail <= target && mag <= 10.0 * target + 10.0 * piece.error) {
            acc.error += tail;
            return acc;
        }
        if (!std::isfinite(tail) && mag == 0.0 && d >= 2) return acc;
    }
    throw ToleranceNotMet(std::string("half-line integral still changing after ") + std::to_string(kMaxDecades) +
                              " decades toward " + (upward ? "infinity" : "the origin"),
                          core_value + acc.value, acc.error);
}

}  // namespace

QuadResult integrate_half_line(const Integrand& f, const HalfLineHints& h, double rel_tol, double abs_tol,
                               int max_subdiv) {
    if (std::isfinite(h.tail_exponent) && !std::isfinite(h.support_hi) && h.tail_exponent <= 1.0) {
        throw DivergenceError("integrand decays like x^-" + std::to_string(h.tail_exponent) +
                              " at infinity; the integral diverges");
    }
    if (std::isfinite(h.head_exponent) && h.support_lo <= 0.0 && h.head_exponent <= -1.0) {
        throw DivergenceError("integrand behaves like x^" + std::to_string(h.head_exponent) +
                              " at the origin; the integral diverges");
    }
    if (!(h.support_hi > h.support_lo)) return {};

    const double scale = h.scale > 0.0 ? h.scale : 1.0;
    double core_lo = std::isnan(h.core_lo) ? scale * 1e-2 : h.core_lo;
    double core_hi = std::isnan(h.core_hi) ? scale * 1e2 : h.core_hi;
    if (h.support_lo > 0.0) core_lo = std::max(core_lo, h.support_lo);
    if (std::isfinite(h.support_hi)) core_hi = std::min(core_hi, h.support_hi);
    if (core_lo >= core_hi) {
        // Support sits entirely above or below the default core window.
        core_lo = h.support_lo > 0.0 ? h.support_lo : core_hi * 1e-4;
        core_hi = std::isfinite(h.support_hi) ? h.support_hi : core_lo * 1e4;
    }

    QuadResult total = log_panel(f, core_lo, core_hi, h.breakpoints, rel_tol, abs_tol, max_subdiv);
    const bool open_above = !std::isfinite(h.support_hi) || h.support_hi > core_hi;
    const bool open_below = h.support_lo <= 0.0 || h.support_lo < core_lo;
    if (open_above) {
        total += extend(f, h, true, core_hi, std::isfinite(h.support_hi) ? h.support_hi : std::numeric_limits<double>::infinity(),
                        total.value, rel_tol, abs_tol, max_subdiv);
    }
    if (open_below) {
        const double limit = h.support_lo > 0.0 ? h.support_lo : 0.0;
        total += extend(f, h, false, core_lo, limit, total.value, rel_tol, abs_tol, max_subdiv);
    }
    return total;
}

}  // namespace critsob
