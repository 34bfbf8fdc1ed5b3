#include "critsob/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/extractor.hpp"
#include "critsob/ledger.hpp"
#include "critsob/parallel.hpp"
#include "critsob/quad.hpp"
#include "critsob/report.hpp"
#include "critsob/specfn.hpp"
#include "critsob/threshold.hpp"

#ifndef CRITSOB_GOLDEN_DIR
#define CRITSOB_GOLDEN_DIR "tests/golden"
#endif

namespace critsob {

namespace {

const char* const kNames[kCriterionCount] = {
    "sobolev constant forms",
    "bubble extremality",
    "non-attainment under concentration",
    "dual seminorm routes",
    "seminorm scaling",
    "interpolation bound chain",
    "threshold tables",
    "R(N) limit",
    "large-N asymptotics",
    "stirling and duplication",
    "truncation family",
    "energy quantization",
    "profile extraction",
    "sign-split identity",
    "determinism",
};

std::string sci(double v) {
    if (!std::isfinite(v)) return fmt_num(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Collects named sub-checks; the detail line lists the failing ones first.
struct Checks {
    std::vector<std::string> notes;
    std::vector<std::string> failures;
    void note(const std::string& s) { notes.push_back(s); }
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    CriterionResult result(int id) const {
        CriterionResult r;
        r.id = id;
        r.name = criterion_name(id);
        r.passed = failures.empty();
        std::ostringstream os;
        if (!failures.empty()) {
            os << "failed: ";
            for (std::size_t i = 0; i < failures.size() && i < 3; ++i) os << (i ? "; " : "") << failures[i];
            if (failures.size() > 3) os << "; +" << failures.size() - 3 << " more";
            if (!notes.empty()) os << " | ";
        }
        for (std::size_t i = 0; i < notes.size(); ++i) os << (i ? ", " : "") << notes[i];
        r.detail = os.str();
        return r;
    }
};

const double kOrders[3] = {0.25, 0.5, 0.75};

CriterionResult c1(const AcceptanceOptions& o) {
    Checks c;
    const double tol = 1e-12 / o.tighten;
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 3; n <= 500; ++n) {
        const SobolevForms f = sobolev_constant_forms(n);
        const double d = rel(f.gamma_form, f.sphere_form);
        if (d > worst) {
            worst = d;
            worst_n = n;
        }
    }
    c.expect(worst <= tol, "forms differ by " + sci(worst) + " at N=" + std::to_string(worst_n));
    const double s3 = sobolev_constant(3);
    c.expect(std::abs(s3 - 5.4779) < 1e-3 / o.tighten, "S_3 = " + fmt_num(s3));
    c.note("max form gap " + sci(worst));
    c.note("S_3 " + fmt_num(s3));
    return c.result(1);
}

CriterionResult c2(const AcceptanceOptions& o) {
    Checks c;
    const double tol = 1e-6 / o.tighten;
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const QuotientReport q = mixed_quotient(radial_bubble(n), n, 0.5, o.quad, false);
        const double d = rel(q.quotient, sobolev_constant(n));
        worst = std::max(worst, d);
        c.expect(d <= tol, "N=" + std::to_string(n) + " quotient off by " + sci(d));
    }
    c.note("N=3..8 max relative deviation " + sci(worst));
    return c.result(2);
}

CriterionResult c3(const AcceptanceOptions& o) {
    Checks c;
    const double tol = 1e-3 / o.tighten;
    const std::vector<double> ks = {1, 2, 4, 8, 16};
    double worst_dev = 0.0, worst_lim = 0.0;
    for (int n : {3, 5})
        for (double s : kOrders) {
            const std::string tag = "N=" + std::to_string(n) + " s=" + fmt_num(s);
            const RadialFn u = truncated_bubble(n, 10.0);
            try {
                const RescaledQuotients r = rescaled_quotient_sequence(u, n, s, ks, o.quad);
                const double sn = sobolev_constant(n);
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    c.expect(r.reports[i].quotient > sn, tag + " term not above S_N");
                    if (i > 0)
                        c.expect(r.reports[i].quotient < r.reports[i - 1].quotient, tag + " not strictly decreasing");
                    worst_dev = std::max(worst_dev, std::abs(r.scaling_deviation[i]));
                    c.expect(std::abs(r.scaling_deviation[i]) <= tol, tag + " s-part off k^{2s-2}");
                }
                const double lim = extrapolate_local_limit(8, r.reports[3].quotient, 16, r.reports[4].quotient, s);
                const double grad = mixed_quotient(u, n, s, o.quad, false).quotient;
                worst_lim = std::max(worst_lim, rel(lim, grad));
                c.expect(rel(lim, grad) <= tol, tag + " extrapolated limit off the gradient quotient");
                c.expect(grad > sn, tag + " gradient quotient not above S_N");
            } catch (const std::exception& e) {
                c.expect(false, tag + " " + e.what());
            }
        }
    c.note("max k^{2s-2} deviation " + sci(worst_dev));
    c.note("max limit deviation " + sci(worst_lim));
    return c.result(3);
}

struct SeminormCell {
    int n = 0;
    double s = 0;
    bool convergent = false;
    double direct = 0, fourier = 0;
    double direct_half = 0, direct_two = 0;
    bool direct_diverged = false, fourier_diverged = false;
    std::string error;
};

// Both routes for u0 on {3..6} x {1/4, 1/2, 3/4}; shared by criteria 4 and 5.
std::vector<SeminormCell> seminorm_cells(const AcceptanceOptions& o, bool scaling) {
    std::vector<SeminormCell> cells;
    for (int n = 3; n <= 6; ++n)
        for (double s : kOrders) {
            SeminormCell c;
            c.n = n;
            c.s = s;
            c.convergent = n + 2.0 * s > 4.0;
            cells.push_back(c);
        }
    parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        SeminormCell& c = cells[i];
        const RadialFn u = radial_bubble(c.n);
        try {
            if (!c.convergent) {
                try {
                    gagliardo_direct(u, c.n, c.s, o.quad);
                } catch (const DivergenceError&) {
                    c.direct_diverged = true;
                }
                try {
                    gagliardo_fourier(u, c.n, c.s, o.quad);
                } catch (const DivergenceError&) {
                    c.fourier_diverged = true;
                }
                return;
            }
            c.direct = gagliardo_direct(u, c.n, c.s, o.quad).value;
            if (scaling) {
                c.direct_half = gagliardo_direct(radial_bubble(c.n, 0.5), c.n, c.s, o.quad).value;
                c.direct_two = gagliardo_direct(radial_bubble(c.n, 2.0), c.n, c.s, o.quad).value;
            } else {
                c.fourier = gagliardo_fourier(u, c.n, c.s, o.quad).value;
            }
        } catch (const std::exception& e) {
            c.error = e.what();
        }
    });
    return cells;
}

CriterionResult c4(const AcceptanceOptions& o) {
    Checks c;
    const double tol = 1e-3 / o.tighten;
    double worst = 0.0;
    int convergent = 0;
    for (const SeminormCell& x : seminorm_cells(o, false)) {
        const std::string tag = "N=" + std::to_string(x.n) + " s=" + fmt_num(x.s);
        if (!x.error.empty()) {
            c.expect(false, tag + " " + x.error);
            continue;
        }
        if (!x.convergent) {
            c.expect(x.direct_diverged && x.fourier_diverged, tag + " divergence not raised by both routes");
            continue;
        }
        ++convergent;
        const double d = rel(x.direct, x.fourier);
        worst = std::max(worst, d);
        c.expect(d <= tol, tag + " routes differ by " + sci(d));
    }
    c.note(std::to_string(convergent) + " convergent pairs, max route gap " + sci(worst));
    return c.result(4);
}

CriterionResult c5(const AcceptanceOptions& o) {
    Checks c;
    const double tol = 1e-4 / o.tighten;
    double worst = 0.0;
    for (const SeminormCell& x : seminorm_cells(o, true)) {
        if (!x.convergent) continue;
        const std::string tag = "N=" + std::to_string(x.n) + " s=" + fmt_num(x.s);
        if (!x.error.empty()) {
            c.expect(false, tag + " " + x.error);
            continue;
        }
        for (auto [lam, v] : {std::pair{0.5, x.direct_half}, std::pair{2.0, x.direct_two}}) {
            const double d = rel(v / x.direct, std::pow(lam, 2.0 - 2.0 * x.s));
            worst = std::max(worst, d);
            c.expect(d <= tol, tag + " lambda=" + fmt_num(lam) + " off by " + sci(d));
        }
    }
    c.note("max deviation from lambda^{2-2s} " + sci(worst));
    return c.result(5);
}

CriterionResult c6(const AcceptanceOptions& o) {
    Checks c;
    struct Cell {
        int n = 0;
        double s = 0;
        double q = 0, err = 0, bound = 0;
        std::string error;
    };
    std::vector<Cell> cells;
    for (int n : {5, 6, 8, 10, 12})
        for (double s : kOrders) {
            Cell x;
            x.n = n;
            x.s = s;
            cells.push_back(x);
        }
    parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        Cell& x = cells[i];
        try {
            const QuadResult r = gagliardo_direct(radial_bubble(x.n), x.n, x.s, o.quad);
            x.q = r.value;
            x.err = r.error;
            x.bound = seminorm_upper_bound(DimPair(x.n, x.s));
        } catch (const std::exception& e) {
            x.error = e.what();
        }
    });
    double least = 1e300;
    for (const Cell& x : cells) {
        const std::string tag = "N=" + std::to_string(x.n) + " s=" + fmt_num(x.s);
        if (!x.error.empty()) {
            c.expect(false, tag + " " + x.error);
            continue;
        }
        const double margin = (x.bound - x.q) / x.bound;
        least = std::min(least, margin);
        c.expect(x.bound - x.q > 10.0 * x.err * o.tighten && margin > 0.0, tag + " no positive margin");
    }
    int disagreements = 0;
    for (double s : kOrders)
        for (int n = 5; n <= 500; ++n) {
            try {
                analytic_predicate(DimPair(n, s));
            } catch (const ConsistencyError&) {
                ++disagreements;
            }
        }
    c.expect(disagreements == 0, std::to_string(disagreements) + " cells where the bound forms disagree");
    c.note("least relative margin " + sci(least));
    c.note("form disagreements on N=5..500: " + std::to_string(disagreements));
    return c.result(6);
}

const int kExactHi = 26;

CriterionResult c7(const AcceptanceOptions& o) {
    Checks c;
    std::vector<ThresholdRecord> analytic, exact;
    for (double s : kOrders) analytic.push_back(threshold_search(s, Mode::Analytic, 5, 500, o.quad, o.threads));
    for (double s : kOrders) exact.push_back(threshold_search(s, Mode::Exact, 5, kExactHi, o.quad, o.threads));
    std::ostringstream n0s;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string tag = "s=" + fmt_num(kOrders[i]);
        const auto& a = analytic[i];
        const auto& e = exact[i];
        c.expect(a.n0.has_value(), tag + " analytic N0 missing");
        c.expect(!a.any_error && !e.any_error, tag + " scan errors");
        if (a.n0 && e.n0) c.expect(*e.n0 <= *a.n0, tag + " exact N0 above analytic N0");
        n0s << (i ? " " : "") << tag << ":" << (a.n0 ? std::to_string(*a.n0) : "-") << "/"
            << (e.n0 ? std::to_string(*e.n0) : "-");
    }
    c.note("N0 analytic/exact " + n0s.str());
    const double tol = 1e-6 / o.tighten;
    const std::string dir = o.golden_dir.empty() ? default_golden_dir() : o.golden_dir;
    for (auto [file, recs] : {std::pair{std::string("threshold_analytic.csv"), &analytic},
                              std::pair{std::string("threshold_exact.csv"), &exact}}) {
        const std::string path = dir + "/" + file;
        const std::string fresh = threshold_csv(*recs);
        const auto golden = read_file(path);
        if (!golden) {
            if (o.pin_missing) {
                write_file_atomic(path, fresh);
                c.note(file + " pinned");
            } else {
                c.expect(false, file + " missing");
            }
            continue;
        }
        const std::string diff = csv_diff(*golden, fresh, tol);
        c.expect(diff.empty(), file + " " + diff);
        if (diff.empty()) c.note(file + " matches");
    }
    return c.result(7);
}

CriterionResult c8(const AcceptanceOptions& o) {
    Checks c;
    const double v = r_of_n(400) * M_PI * M_PI * std::exp(2.0);
    c.expect(std::abs(v - 1.0) <= 0.01 / o.tighten, "R(400) pi^2 e^2 = " + fmt_num(v));
    double worst = 0.0;
    for (int n = 5; n <= 500; ++n) {
        const RForms f = r_of_n_forms(n);
        worst = std::max(worst, rel(f.gamma_form, f.simplified_form));
    }
    c.expect(worst <= 1e-10 / o.tighten, "forms differ by " + sci(worst));
    c.note("R(400) pi^2 e^2 " + fmt_num(v));
    c.note("max form gap " + sci(worst));
    return c.result(8);
}

CriterionResult c9(const AcceptanceOptions& o) {
    Checks c;
    const AsymptoticTable t = asymptotic_scan(500);
    double worst = 0.0;
    for (const AsymptoticRow& r : t.rows)
        if (r.n >= 80) worst = std::max(worst, r.omega_ratio);
    c.expect(worst < 1e-6 / o.tighten, "omega ratio reaches " + sci(worst) + " beyond N=80");
    c.expect(t.sobolev_increasing, "S_N not strictly increasing");
    c.expect(t.ratio_decreasing_tail, "bound ratio not decreasing on the tail");
    c.expect(t.log10_ratio_last < -1.0, "bound ratio not small at N=500");
    c.note("max omega ratio for N>=80 " + sci(worst));
    c.note("log10 bound ratio at N=500 " + fmt_num(t.log10_ratio_last));
    return c.result(9);
}

CriterionResult c10(const AcceptanceOptions& o) {
    Checks c;
    double worst_excess = -1e300;
    for (int n = 10; n <= 500; ++n) {
        const double r = stirling_ratio(n);
        const double cap = 1.0 + 1.0 / (10.0 * n) / o.tighten;
        c.expect(r > 1.0 && r <= cap, "stirling ratio out of range at N=" + std::to_string(n));
        worst_excess = std::max(worst_excess, (r - 1.0) * 10.0 * n);
    }
    double worst = 0.0;
    for (double x : {0.3, 0.5, 1.0, 1.7, 2.5, 5.0, 10.0, 25.5, 50.0, 100.0, 170.0}) worst = std::max(worst, duplication_residual(x));
    c.expect(worst <= 1e-11 / o.tighten, "duplication residual " + sci(worst));
    c.note("max 10N(ratio-1) " + fmt_num(worst_excess));
    c.note("max duplication residual " + sci(worst));
    return c.result(10);
}

CriterionResult c11(const AcceptanceOptions& o) {
    Checks c;
    const int n = 5;
    const std::vector<double> Rs = {10, 30, 100}, ts = {0.0, 0.25, 0.5, 0.75, 0.9};
    std::vector<double> vals(Rs.size() * ts.size());
    std::vector<std::string> errs(vals.size());
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    parallel_for(vals.size(), o.threads, [&](std::size_t i) {
        try {
            vals[i] = truncation_error(n, CoronParams{ts[i % ts.size()], e1}, Rs[i / ts.size()], o.quad).value;
        } catch (const std::exception& e) {
            errs[i] = e.what();
        }
    });
    for (const auto& e : errs) c.expect(e.empty(), e);
    const double energy = bubble_grad_sq(n) + bubble_l2_sq(n);
    std::vector<double> sup(Rs.size(), 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) sup[i / ts.size()] = std::max(sup[i / ts.size()], vals[i]);
    for (std::size_t j = 1; j < sup.size(); ++j) c.expect(sup[j] < sup[j - 1], "sup error not decreasing in R");
    const double frac = sup.back() / energy;
    c.expect(frac < 0.01 / o.tighten, "R=100 error is " + sci(frac) + " of the energy");
    c.note("sup error R=10/30/100 " + sci(sup[0]) + "/" + sci(sup[1]) + "/" + sci(sup[2]));
    c.note("fraction at R=100 " + sci(frac));
    return c.result(11);
}

CriterionResult c12(const AcceptanceOptions& o) {
    Checks c;
    double worst = 0.0;
    for (int n : {3, 4, 5}) {
        const double d = rel(bubble_energy_quadrature(n, o.quad).value, bubble_energy(n));
        worst = std::max(worst, d);
        c.expect(d <= 1e-5 / o.tighten, "N=" + std::to_string(n) + " quadrature off by " + sci(d));
    }
    for (int n = 3; n <= 12; ++n) {
        const double b = bubble_energy(n);
        const auto [lo, hi] = coron_window(n);
        c.expect(lo == b && hi == 2.0 * b, "window at N=" + std::to_string(n));
        std::vector<Bubble> profs;
        for (int k = 0; k < 3; ++k) {
            std::vector<double> z(n, 0.0);
            z[0] = 10.0 * k;
            profs.push_back(Bubble{z, 0.1 * (k + 1), solution_amplitude(n)});
        }
        const ProfileSet ps{0.75, profs, 0.0};
        c.expect(ps_level(ps, n) == 0.75 + 3.0 * b, "level arithmetic at N=" + std::to_string(n));
    }
    c.note("max quadrature deviation " + sci(worst));
    c.note("beta*(3) " + fmt_num(bubble_energy(3)));
    return c.result(12);
}

CriterionResult c13(const AcceptanceOptions& o) {
    Checks c;
    const SyntheticSpec sp = default_two_bubble();
    ExtractOptions eo;
    eo.seed = o.seed;
    double sep16 = 0.0;
    for (double k : {16.0, 32.0}) {
        const ExtractionResult r = extract_all(make_ps_sequence(sp, k), sp.n, 0.5, 4, o.quad, eo);
        if (r.profiles.size() != 2) {
            c.expect(false, "k=" + fmt_num(k) + " recovered " + std::to_string(r.profiles.size()) + " profiles");
            return c.result(13);
        }
        if (k == 16.0) {
            sep16 = r.separation[0][1];
            continue;
        }
        const auto truth = scheduled_bubbles(sp, k);
        double cerr = 0.0, serr = 0.0;
        for (int i = 0; i < 2; ++i) {
            double d2 = 0.0;
            for (int j = 0; j < sp.n; ++j) {
                const double d = r.profiles[i].center[j] - truth[i].center[j];
                d2 += d * d;
            }
            cerr = std::max(cerr, std::sqrt(d2) / truth[i].scale);
            serr = std::max(serr, rel(r.profiles[i].scale, truth[i].scale));
        }
        const double gap = std::abs(r.additivity_gap.value) / r.input_energy.value;
        const double sep32 = r.separation[0][1];
        c.expect(cerr <= 0.01 / o.tighten, "center error " + sci(cerr) + " of scale");
        c.expect(serr <= 0.02 / o.tighten, "scale error " + sci(serr));
        c.expect(gap <= 0.01 / o.tighten, "additivity gap " + sci(gap));
        c.expect(sep32 >= 2.0 * sep16, "separation ratio " + fmt_num(sep32 / sep16));
        c.expect(!r.partial, "partial extraction");
        c.note("center err " + sci(cerr) + " scale err " + sci(serr));
        c.note("gap " + sci(gap));
        char buf[64];
        std::snprintf(buf, sizeof buf, "separation %.4f -> %.4f", sep16, sep32);
        c.note(buf);
    }
    return c.result(13);
}

CriterionResult c14(const AcceptanceOptions& o) {
    Checks c;
    const IdentityReport r = sign_changing_identity(smooth_bump(0.0, 1.0), smooth_bump(2.5, 0.5), DimPair(3, 0.5), o.quad);
    c.expect(r.residual <= 1e-3 / o.tighten, "residual " + sci(r.residual));
    c.note("residual " + sci(r.residual));
    c.note("cross " + fmt_num(r.cross));
    return c.result(14);
}

using Runner = std::function<CriterionResult(const AcceptanceOptions&)>;
const Runner kRunners[kCriterionCount - 1] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};

CriterionResult guarded(int id, const AcceptanceOptions& o) {
    try {
        return kRunners[id - 1](o);
    } catch (const std::exception& e) {
        CriterionResult r;
        r.id = id;
        r.name = criterion_name(id);
        r.detail = std::string("error: ") + e.what();
        return r;
    }
}

std::vector<int> selection(const AcceptanceOptions& o) {
    std::vector<int> ids = o.only;
    if (ids.empty())
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids)
        if (id < 1 || id > kCriterionCount) throw DomainError("unknown criterion " + std::to_string(id));
    return ids;
}

std::string serialize(const std::vector<CriterionResult>& rs) {
    AcceptanceReport rep;
    rep.criteria = rs;
    return rep.text();
}

// Criterion 15: the other selected criteria (all of 1..14 when none) run twice
// from scratch; the serialized reports must match byte for byte.
CriterionResult c15(const AcceptanceOptions& o, const std::vector<CriterionResult>& first) {
    Checks c;
    std::vector<CriterionResult> a = first;
    AcceptanceOptions again = o;
    again.pin_missing = false;
    if (a.empty())
        for (int id = 1; id < kCriterionCount; ++id) a.push_back(guarded(id, again));
    std::vector<CriterionResult> b;
    for (const CriterionResult& r : a) b.push_back(guarded(r.id, again));
    const std::string sa = serialize(a), sb = serialize(b);
    c.expect(sa == sb, "reruns differ");
    if (sa != sb) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (serialize({a[i]}) != serialize({b[i]})) c.expect(false, "criterion " + std::to_string(a[i].id));
    }
    c.note(std::to_string(a.size()) + " criteria rerun, " + std::to_string(sa.size()) + " report bytes compared");
    return c.result(15);
}

}  // namespace

bool AcceptanceReport::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& r) { return r.passed; });
}

std::vector<int> AcceptanceReport::failed_ids() const {
    std::vector<int> out;
    for (const auto& r : criteria)
        if (!r.passed) out.push_back(r.id);
    return out;
}

std::string AcceptanceReport::text() const {
    std::ostringstream os;
    for (const auto& r : criteria)
        os << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.detail << '\n';
    return os.str();
}

const char* criterion_name(int id) {
    if (id < 1 || id > kCriterionCount) throw DomainError("unknown criterion " + std::to_string(id));
    return kNames[id - 1];
}

std::string default_golden_dir() { return CRITSOB_GOLDEN_DIR; }

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    criterion_name(id);
    opt.quad.validate();
    if (!(opt.tighten > 0.0)) throw DomainError("tighten factor must be positive");
    if (id == kCriterionCount) return c15(opt, {});
    return guarded(id, opt);
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opt) {
    opt.quad.validate();
    if (!(opt.tighten > 0.0)) throw DomainError("tighten factor must be positive");
    AcceptanceReport rep;
    const std::vector<int> ids = selection(opt);
    for (int id : ids)
        if (id != kCriterionCount) rep.criteria.push_back(guarded(id, opt));
    if (ids.back() == kCriterionCount) rep.criteria.push_back(c15(opt, rep.criteria));
    return rep;
}

}  // namespace critsob
