#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "critsob/acceptance.hpp"
#include "critsob/bubble.hpp"
#include "critsob/errors.hpp"
#include "critsob/extractor.hpp"
#include "critsob/ledger.hpp"
#include "critsob/parallel.hpp"
#include "critsob/quad.hpp"
#include "critsob/report.hpp"
#include "critsob/specfn.hpp"
#include "critsob/threshold.hpp"

namespace critsob::cli {

namespace {

struct Range {
    int lo;
    int hi;
};

Range range_of(const RunConfig& c, int def_lo, int def_hi, int floor, int ceiling) {
    const Range r{c.n_min.value_or(def_lo), c.n_max.value_or(def_hi)};
    if (r.lo > r.hi) throw ConfigError("empty N range " + std::to_string(r.lo) + ".." + std::to_string(r.hi));
    if (r.lo < floor) throw ConfigError("N must be at least " + std::to_string(floor) + " here");
    if (r.hi > ceiling) throw ConfigError("N must be at most " + std::to_string(ceiling) + " here");
    return r;
}

void check_orders(const std::vector<double>& s) {
    if (s.empty()) throw ConfigError("empty list of orders s");
    for (double v : s)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("order s = " + fmt_num(v) + " outside (0, 1)");
}

void check_quad(const RunConfig& c) {
    try {
        c.quad.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

Value opt(const std::optional<double>& v) { return v ? Value(*v) : Value(); }
Value num(double v) { return std::isfinite(v) ? Value(v) : Value(); }
Value integer(long long v) { return Value(static_cast<std::int64_t>(v)); }

Value truth(const std::optional<Truth>& t) { return t ? Value(std::string(to_string(*t))) : Value(); }

}  // namespace

CommandOutput cmd_constants(const RunConfig& c, std::ostream& out) {
    const Range r = range_of(c, 3, 20, 3, 100000);
    Table t;
    t.name = "constants";
    t.columns = {"N", "s", "sobolev_gamma_form", "sobolev_sphere_form", "sobolev", "omega_n_minus_1",
                 "beta_star", "coron_lo", "coron_hi", "error_estimate", "status"};
    for (int n = r.lo; n <= r.hi; ++n) {
        const SobolevForms f = sobolev_constant_forms(n);
        std::string status = "ok";
        double sn = std::nan("");
        try {
            sn = sobolev_constant(n);
        } catch (const std::exception& e) {
            status = e.what();
        }
        const auto [lo, hi] = coron_window(n);
        t.add({integer(n), Value(), num(f.gamma_form), num(f.sphere_form), num(sn), num(sphere_measure(n - 1)),
               num(bubble_energy(n)), num(lo), num(hi), num(std::abs(f.gamma_form - f.sphere_form) / f.sphere_form),
               status});
    }
    out << "constants: " << t.rows.size() << " rows, N=" << r.lo << ".." << r.hi << "\n";
    return {{t}, {}, 0};
}

CommandOutput cmd_bubble(const RunConfig& c, std::ostream& out) {
    const Range r = range_of(c, 3, 8, 3, 40);
    check_orders(c.s_list);
    check_quad(c);
    struct Cell {
        int n = 0;
        double s = 0;
        double direct = std::nan(""), fourier = std::nan(""), bound = std::nan(""), err = std::nan("");
        std::string status = "ok";
    };
    std::vector<Cell> cells;
    for (int n = r.lo; n <= r.hi; ++n)
        for (double s : c.s_list) {
            Cell x;
            x.n = n;
            x.s = s;
            cells.push_back(x);
        }
    parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        Cell& x = cells[i];
        try {
            if (x.n >= 5) x.bound = seminorm_upper_bound(DimPair(x.n, x.s));
            if (x.n + 2.0 * x.s <= 4.0) {
                x.status = "divergent";
                return;
            }
            const RadialFn u = radial_bubble(x.n);
            const QuadResult d = gagliardo_direct(u, x.n, x.s, c.quad);
            const QuadResult f = gagliardo_fourier(u, x.n, x.s, c.quad);
            x.direct = d.value;
            x.fourier = f.value;
            x.err = std::max({d.error, f.error, std::abs(d.value - f.value)});
        } catch (const std::exception& e) {
            x.status = e.what();
        }
    });
    Table t;
    t.name = "bubble";
    t.columns = {"N", "s", "grad_sq", "l2_sq", "lcrit", "solution_amplitude", "seminorm_direct",
                 "seminorm_fourier", "seminorm_bound", "bubble_energy", "error_estimate", "status"};
    int errors = 0;
    for (const Cell& x : cells) {
        if (x.status != "ok" && x.status != "divergent") ++errors;
        t.add({integer(x.n), num(x.s), num(bubble_grad_sq(x.n)), x.n > 4 ? num(bubble_l2_sq(x.n)) : Value(),
               num(bubble_lcrit(x.n)), num(solution_amplitude(x.n)), num(x.direct), num(x.fourier), num(x.bound),
               num(bubble_energy(x.n)), num(x.err), x.status});
    }
    out << "bubble: " << t.rows.size() << " cells, " << errors << " errors\n";
    return {{t}, {}, errors ? 3 : 0};
}

CommandOutput cmd_threshold(const RunConfig& c, std::ostream& out) {
    const bool exact = c.mode == Mode::Exact;
    const Range r = range_of(c, 5, exact ? 26 : 500, 5, exact ? 60 : 100000);
    check_orders(c.s_list);
    check_quad(c);
    std::vector<ThresholdRecord> recs;
    for (double s : c.s_list) recs.push_back(threshold_search(s, c.mode, r.lo, r.hi, c.quad, c.threads));

    Table t;
    t.name = "threshold";
    t.columns = {"N", "s", "mode", "lhs_analytic", "lhs_exact", "rhs", "predicate_analytic", "predicate_exact",
                 "margin_analytic", "margin_exact", "error_estimate", "status"};
    Table sum;
    sum.name = "threshold_summary";
    sum.columns = {"s", "mode", "n_lo", "n_hi", "n0", "non_monotone", "any_error"};
    bool any_error = false;
    std::vector<Series> series;
    for (const ThresholdRecord& rec : recs) {
        Series sr;
        sr.label = "s=" + fmt_num(rec.s);
        for (const BoundReport& b : rec.table) {
            t.add({integer(b.n), num(b.s), std::string(to_string(rec.mode)), opt(b.lhs_analytic), opt(b.lhs_exact),
                   num(b.rhs), truth(b.predicate_analytic), truth(b.predicate_exact), opt(b.margin_analytic),
                   opt(b.margin_exact), num(b.error_estimate), b.status});
            sr.x.push_back(b.n);
            const auto& m = exact ? b.margin_exact : b.margin_analytic;
            sr.y.push_back(m ? *m : std::nan(""));
        }
        series.push_back(sr);
        sum.add({num(rec.s), std::string(to_string(rec.mode)), integer(rec.n_lo), integer(rec.n_hi),
                 rec.n0 ? integer(*rec.n0) : Value(), rec.non_monotone, rec.any_error});
        any_error = any_error || rec.any_error;
        out << "s=" << fmt_num(rec.s) << " " << to_string(rec.mode) << " N=" << rec.n_lo << ".." << rec.n_hi
            << ": N0=" << (rec.n0 ? std::to_string(*rec.n0) : std::string("none"))
            << (rec.non_monotone ? " (non-monotone)" : "") << (rec.any_error ? " (cells with errors)" : "") << "\n";
    }
    CommandOutput o{{t, sum}, {}, any_error ? 3 : 0};
    if (c.svg)
        o.charts.push_back({"threshold", svg_chart("relative margin of the threshold inequality", "N",
                                                   "(rhs - lhs) / max(lhs, rhs)", series)});
    return o;
}

CommandOutput cmd_asymptotics(const RunConfig& c, std::ostream& out) {
    const Range r = range_of(c, 3, 500, 3, 20000);
    if (r.hi < 10) throw ConfigError("asymptotic scan needs N_max >= 10");
    check_orders(c.s_list);
    Table t;
    t.name = "asymptotics";
    t.columns = {"N", "s", "omega_ratio", "sobolev", "bound_ratio", "log10_omega_ratio", "log10_bound_ratio",
                 "r_of_n", "stirling_ratio", "error_estimate", "status"};
    std::vector<Series> series;
    for (double s : c.s_list) {
        const AsymptoticTable a = asymptotic_scan(r.hi, s);
        Series sr;
        sr.label = "s=" + fmt_num(s);
        for (const AsymptoticRow& row : a.rows) {
            if (row.n < r.lo) continue;
            Value rn, err;
            if (row.n >= 5) {
                const RForms f = r_of_n_forms(row.n);
                rn = num(f.simplified_form);
                err = num(std::abs(f.gamma_form - f.simplified_form) / f.simplified_form);
            }
            t.add({integer(row.n), num(s), num(row.omega_ratio), num(row.sobolev), num(row.bound_ratio),
                   num(row.log10_omega_ratio), num(row.log10_bound_ratio), rn, num(stirling_ratio(row.n)), err,
                   std::string("ok")});
            sr.x.push_back(row.n);
            sr.y.push_back(row.log10_bound_ratio);
        }
        series.push_back(sr);
        out << "s=" << fmt_num(s) << ": omega ratio < 1e-6 from N=80 " << (a.omega_small_from_80 ? "yes" : "no")
            << ", S_N increasing " << (a.sobolev_increasing ? "yes" : "no") << ", bound ratio decreasing on tail "
            << (a.ratio_decreasing_tail ? "yes" : "no") << ", log10 ratio at N=" << r.hi << " "
            << fmt_num(a.log10_ratio_last) << "\n";
    }
    CommandOutput o{{t}, {}, 0};
    if (c.svg) o.charts.push_back({"asymptotics", svg_chart("bound ratio", "N", "log10(lhs / rhs)", series)});
    return o;
}

CommandOutput cmd_ledger(const RunConfig& c, std::ostream& out) {
    const Range r = range_of(c, 3, 8, 3, 40);
    check_orders(c.s_list);
    check_quad(c);
    struct Cell {
        int n = 0;
        double quad = std::nan(""), err = std::nan(""), residual = std::nan("");
        std::string status = "ok";
    };
    std::vector<Cell> cells;
    for (int n = r.lo; n <= r.hi; ++n) {
        Cell x;
        x.n = n;
        cells.push_back(x);
    }
    parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        Cell& x = cells[i];
        try {
            const QuadResult q = bubble_energy_quadrature(x.n, c.quad);
            x.quad = q.value;
            x.err = std::max(q.error, std::abs(q.value - bubble_energy(x.n)));
            x.residual = solution_residual(x.n, solution_amplitude(x.n));
        } catch (const std::exception& e) {
            x.status = e.what();
        }
    });
    Table t;
    t.name = "ledger";
    t.columns = {"N", "s", "beta_star", "beta_quadrature", "coron_lo", "coron_hi", "solution_residual",
                 "error_estimate", "status"};
    int errors = 0;
    for (const Cell& x : cells) {
        if (x.status != "ok") ++errors;
        const auto [lo, hi] = coron_window(x.n);
        t.add({integer(x.n), Value(), num(bubble_energy(x.n)), num(x.quad), num(lo), num(hi), num(x.residual),
               num(x.err), x.status});
    }

    Table id;
    id.name = "ledger_identity";
    id.columns = {"N", "s", "direct", "split", "cross", "error_estimate", "status"};
    for (double s : c.s_list) {
        try {
            const IdentityReport rep =
                sign_changing_identity(smooth_bump(0.0, 1.0), smooth_bump(2.5, 0.5), DimPair(3, s), c.quad);
            id.add({integer(3), num(s), num(rep.direct), num(rep.split), num(rep.cross), num(rep.residual),
                    std::string("ok")});
        } catch (const std::exception& e) {
            ++errors;
            id.add({integer(3), num(s), Value(), Value(), Value(), Value(), std::string(e.what())});
        }
    }
    out << "ledger: N=" << r.lo << ".." << r.hi << ", " << errors << " errors\n";
    return {{t, id}, {}, errors ? 3 : 0};
}

CommandOutput cmd_extract(const RunConfig& c, std::ostream& out) {
    check_orders(c.s_list);
    check_quad(c);
    try {
        c.synthetic.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (c.ks.empty()) throw ConfigError("extract.k is empty");
    for (double k : c.ks)
        if (!(k > 0.0)) throw ConfigError("sequence index k must be positive");
    if (c.max_profiles < 0 || c.max_profiles > 32) throw ConfigError("extract.max_profiles must be in 0..32");
    if (c.samples < 1000) throw ConfigError("extract.samples must be at least 1000");

    const int n = c.synthetic.n;
    const double s = c.s_list.front();
    Table prof;
    prof.name = "extract_profiles";
    prof.columns = {"N", "s", "k", "profile"};
    for (int i = 1; i <= n; ++i) prof.columns.push_back("z" + std::to_string(i));
    for (const char* col : {"scale", "amplitude", "fit_residual", "profile_energy", "profile_seminorm",
                            "true_scale", "error_estimate", "status"})
        prof.columns.push_back(col);
    Table sum;
    sum.name = "extract_summary";
    sum.columns = {"N", "s", "k", "profiles", "input_energy", "residual_energy", "additivity_gap",
                   "relative_gap", "min_separation", "partial", "stop_reason", "error_estimate", "status"};
    bool partial = false;
    ExtractOptions eo;
    eo.seed = c.seed;
    eo.samples = c.samples;
    for (double k : c.ks) {
        const ExtractionResult r = extract_all(make_ps_sequence(c.synthetic, k), n, s, c.max_profiles, c.quad, eo);
        const auto truth = scheduled_bubbles(c.synthetic, k);
        for (std::size_t i = 0; i < r.profiles.size(); ++i) {
            const Bubble& b = r.profiles[i];
            std::vector<Value> row = {integer(n), num(s), num(k), integer(static_cast<long long>(i + 1))};
            for (double z : b.center) row.push_back(num(z));
            // nearest scheduled bubble, for reference
            Value true_scale;
            double best = 1e300;
            for (const Bubble& t : truth) {
                double d2 = 0.0;
                for (int j = 0; j < n; ++j) d2 += (t.center[j] - b.center[j]) * (t.center[j] - b.center[j]);
                if (d2 < best) {
                    best = d2;
                    true_scale = num(t.scale);
                }
            }
            row.insert(row.end(), {num(b.scale), num(b.amplitude), num(r.fit_residuals[i]),
                                   num(r.profile_energies[i]), num(r.profile_seminorms[i]), true_scale,
                                   num(r.fit_residuals[i]), std::string(r.partial ? "partial" : "ok")});
            prof.add(std::move(row));
        }
        double min_sep = std::nan("");
        for (std::size_t i = 0; i < r.separation.size(); ++i)
            for (std::size_t j = 0; j < r.separation.size(); ++j)
                if (i != j && !(r.separation[i][j] >= min_sep)) min_sep = r.separation[i][j];
        const double rel_gap = std::abs(r.additivity_gap.value) / std::abs(r.input_energy.value);
        sum.add({integer(n), num(s), num(k), integer(static_cast<long long>(r.profiles.size())),
                 num(r.input_energy.value), num(r.residual_energy.value), num(r.additivity_gap.value), num(rel_gap),
                 num(min_sep), r.partial, r.stop_reason, num(r.additivity_gap.std_error),
                 std::string(r.partial ? "partial" : "ok")});
        partial = partial || r.partial;
        out << "k=" << fmt_num(k) << ": " << r.profiles.size() << " profiles, relative gap " << fmt_num(rel_gap)
            << ", stop: " << r.stop_reason << "\n";
    }
    return {{prof, sum}, {}, partial ? 3 : 0};
}

CommandOutput cmd_verify(const RunConfig& c, std::ostream& out) {
    check_quad(c);
    if (!(c.tighten > 0.0)) throw ConfigError("verify.tighten must be positive");
    for (int id : c.only)
        if (id < 1 || id > kCriterionCount) throw ConfigError("unknown criterion " + std::to_string(id));
    AcceptanceOptions o;
    o.tighten = c.tighten;
    o.quad = c.quad;
    o.threads = c.threads;
    o.seed = c.seed;
    o.golden_dir = c.golden_dir;
    o.only = c.only;
    const AcceptanceReport rep = run_acceptance(o);
    Table t;
    t.name = "verify";
    t.columns = {"id", "name", "passed", "detail"};
    for (const CriterionResult& r : rep.criteria) t.add({integer(r.id), r.name, r.passed, r.detail});
    out << rep.text();
    const auto failed = rep.failed_ids();
    if (failed.empty()) {
        out << "all " << rep.criteria.size() << " criteria passed\n";
    } else {
        out << "failed criteria:";
        for (int id : failed) out << ' ' << id;
        out << "\n";
    }
    return {{t}, {}, failed.empty() ? 0 : 1};
}

}  // namespace critsob::cli
