#include "critsob/extractor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "critsob/errors.hpp"
#include "critsob/ledger.hpp"
#include "critsob/quad.hpp"
#include "critsob/specfn.hpp"

namespace critsob {

namespace {

double norm_sq(std::span<const double> x) { return std::inner_product(x.begin(), x.end(), x.begin(), 0.0); }

// A radial bump placed at `center` as a field on R^N.
FieldOracle bump_field(int n, std::vector<double> center, double radius, double amplitude) {
    const RadialFn b = smooth_bump(0.0, radius, amplitude);
    FieldOracle f;
    f.n = n;
    f.value = [b, center](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        return b.value(std::sqrt(r2));
    };
    f.gradient = [b, center](std::span<const double> x, std::span<double> g) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        const double r = std::sqrt(r2);
        const double d = r > 0.0 ? b.derivative(r) / r : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = d * (x[i] - center[i]);
    };
    return f;
}

FieldOracle sum_fields(std::vector<FieldOracle> parts, int n) {
    FieldOracle f;
    f.n = n;
    f.value = [parts](std::span<const double> x) {
        double v = 0.0;
        for (const auto& p : parts) v += p.value(x);
        return v;
    };
    f.gradient = [parts, n](std::span<const double> x, std::span<double> g) {
        std::fill(g.begin(), g.end(), 0.0);
        std::vector<double> tmp(n);
        for (const auto& p : parts) {
            p.gradient(x, tmp);
            for (int i = 0; i < n; ++i) g[i] += tmp[i];
        }
    };
    return f;
}

std::vector<double> or_zero(const std::vector<double>& v, int n) { return v.empty() ? std::vector<double>(n, 0.0) : v; }

}  // namespace

FieldOracle bubble_field(const Bubble& b) {
    b.validate();
    FieldOracle f;
    f.n = b.dim();
    f.value = [b](std::span<const double> x) { return eval_bubble(b, x); };
    f.gradient = [b](std::span<const double> x, std::span<double> g) {
        const auto v = bubble_gradient(b, x);
        std::copy(v.begin(), v.end(), g.begin());
    };
    return f;
}

FieldOracle subtract_bubbles(const FieldOracle& f, const std::vector<Bubble>& bubbles) {
    if (bubbles.empty()) return f;
    const int n = f.n;
    FieldOracle out;
    out.n = n;
    out.value = [f, bubbles](std::span<const double> x) {
        double v = f.value(x);
        for (const Bubble& b : bubbles) v -= eval_bubble(b, x);
        return v;
    };
    out.gradient = [f, bubbles](std::span<const double> x, std::span<double> g) {
        f.gradient(x, g);
        for (const Bubble& b : bubbles) {
            const auto d = bubble_gradient(b, x);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] -= d[i];
        }
    };
    return out;
}

Bubble BubbleSchedule::at(int n, double k) const {
    if (!(k > 0.0)) throw DomainError("sequence index must be positive");
    Bubble b;
    b.center = or_zero(center, n);
    if (!drift.empty())
        for (int i = 0; i < n; ++i) b.center[i] += drift[i] * std::log(k);
    b.scale = c / k;
    b.amplitude = amplitude == 0.0 ? solution_amplitude(n) : amplitude;
    return b;
}

void SyntheticSpec::validate() const {
    if (n < 3 || n > 5) throw DomainError("synthetic sequences support N in {3, 4, 5}");
    auto dim_ok = [this](const std::vector<double>& v) { return v.empty() || static_cast<int>(v.size()) == n; };
    for (const BubbleSchedule& b : bubbles) {
        if (!(b.c > 0.0)) throw DomainError("schedule constant c must be positive");
        if (!dim_ok(b.center) || !dim_ok(b.drift)) throw DomainError("schedule vectors must have N entries");
    }
    if (!dim_ok(remainder_center)) throw DomainError("remainder center must have N entries");
    if (base_on && !(base_radius > 0.0)) throw DomainError("base radius must be positive");
    if (!(remainder_radius > 0.0)) throw DomainError("remainder radius must be positive");
}

SyntheticSpec default_two_bubble() {
    SyntheticSpec s;
    s.n = 5;
    BubbleSchedule a;
    a.center = {-0.5, 0, 0, 0, 0};
    a.drift = {-0.05, 0, 0, 0, 0};
    a.c = 1.0;
    BubbleSchedule b;
    b.center = {0.5, 0, 0, 0, 0};
    b.drift = {0.05, 0, 0, 0, 0};
    b.c = 1.5;
    s.bubbles = {a, b};
    return s;
}

std::vector<Bubble> scheduled_bubbles(const SyntheticSpec& spec, double k) {
    spec.validate();
    std::vector<Bubble> out;
    for (const BubbleSchedule& b : spec.bubbles) out.push_back(b.at(spec.n, k));
    return out;
}

FieldOracle base_field(const SyntheticSpec& spec) {
    spec.validate();
    if (!spec.base_on) return bump_field(spec.n, std::vector<double>(spec.n, 0.0), 1.0, 0.0);
    return bump_field(spec.n, std::vector<double>(spec.n, 0.0), spec.base_radius, spec.base_amplitude);
}

FieldOracle make_ps_sequence(const SyntheticSpec& spec, double k) {
    spec.validate();
    const int n = spec.n;
    std::vector<FieldOracle> parts;
    if (spec.base_on) parts.push_back(base_field(spec));
    for (const Bubble& b : scheduled_bubbles(spec, k)) parts.push_back(bubble_field(b));
    if (spec.remainder != 0.0) {
        parts.push_back(bump_field(n, or_zero(spec.remainder_center, n), spec.remainder_radius, spec.remainder / k));
    }
    return sum_fields(std::move(parts), n);
}

double half_height_radius(int n, double lambda) {
    return lambda * std::sqrt(std::pow(2.0, 2.0 / (n - 2)) - 1.0);
}

namespace {

// Radius along direction `dir` where |f| first drops to half of `peak`.
double half_height_along(const FieldOracle& f, const std::vector<double>& c, int axis, double sign, double peak,
                         double r0) {
    std::vector<double> x = c;
    auto at = [&](double r) {
        x = c;
        x[axis] += sign * r;
        return std::abs(f.value(x));
    };
    double lo = 0.0, hi = r0;
    int guard = 0;
    while (at(hi) > 0.5 * peak && guard++ < 200) {
        lo = hi;
        hi *= 2.0;
    }
    if (guard >= 200) return std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (at(mid) > 0.5 * peak)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Detection detect_concentration(const FieldOracle& f, std::span<const double> box_lo, std::span<const double> box_hi,
                               int grid, double flat_tol) {
    const int n = f.n;
    if (static_cast<int>(box_lo.size()) != n || static_cast<int>(box_hi.size()) != n) {
        throw DomainError("search box must have N components");
    }
    if (grid < 3) throw DomainError("grid resolution must be at least 3");
    std::vector<double> a(box_lo.begin(), box_lo.end()), b(box_hi.begin(), box_hi.end());
    for (int i = 0; i < n; ++i)
        if (!(b[i] > a[i])) throw DomainError("search box must have positive extent");
    const double width0 = *std::max_element(b.begin(), b.end()) - *std::min_element(a.begin(), a.end());

    Detection d;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);
    std::vector<double> x(n);
    for (int level = 0; level < 40; ++level) {
        double best = -1.0;
        std::vector<double> bx(n);
        for (std::size_t t = 0; t < total; ++t) {
            std::size_t rest = t;
            for (int i = 0; i < n; ++i) {
                const int k = static_cast<int>(rest % grid);
                rest /= grid;
                x[i] = a[i] + (b[i] - a[i]) * k / (grid - 1);
            }
            const double v = std::abs(f.value(x));
            if (v > best) {
                best = v;
                bx = x;
            }
        }
        if (level == 0 && !(best >= flat_tol)) return d;
        d.center = bx;
        d.peak = best;
        d.levels = level + 1;
        std::vector<double> radii;
        for (int i = 0; i < n; ++i)
            for (double sg : {-1.0, 1.0}) radii.push_back(half_height_along(f, bx, i, sg, best, 1e-4 * width0));
        std::sort(radii.begin(), radii.end());
        const double r = 0.5 * (radii[n - 1] + radii[n]);
        d.scale = r / std::sqrt(std::pow(2.0, 2.0 / (n - 2)) - 1.0);
        double spacing = 0.0;
        for (int i = 0; i < n; ++i) spacing = std::max(spacing, (b[i] - a[i]) / (grid - 1));
        if (spacing < 0.05 * d.scale) break;
        for (int i = 0; i < n; ++i) {
            const double w = 0.25 * (b[i] - a[i]);
            a[i] = bx[i] - w;
            b[i] = bx[i] + w;
        }
    }
    d.found = std::isfinite(d.scale) && d.scale > 0.0;
    return d;
}

FitResult fit_bubble(const FieldOracle& f, std::span<const double> init_center, double init_scale,
                     const FitOptions& opt) {
    const int n = f.n;
    if (static_cast<int>(init_center.size()) != n) throw DomainError("initial center must have N components");
    if (!(init_scale > 0.0)) throw DomainError("initial scale must be positive");
    if (opt.cloud < 4 * (n + 3)) throw DomainError("sample cloud too small for the fit");
    const double e = 0.5 * (n - 2);

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int m = opt.cloud;
    Eigen::MatrixXd pts(m, n);
    Eigen::VectorXd data(m), w(m);
    const double spreads[3] = {0.5, 1.0, 3.0};
    std::vector<double> x(n);
    for (int i = 0; i < m; ++i) {
        const double sg = spreads[i % 3] * init_scale;
        for (int j = 0; j < n; ++j) {
            x[j] = init_center[j] + sg * gauss(rng);
            pts(i, j) = x[j];
        }
        data(i) = f.value(x);
    }
    const double peak = data.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) throw DomainError("field vanishes on the sample cloud");
    for (int i = 0; i < m; ++i) w(i) = 1.0 / (std::abs(data(i)) + 1e-2 * peak);

    const int np = n + 3;
    Eigen::VectorXd p(np);
    for (int j = 0; j < n; ++j) p(j) = init_center[j];
    p(n) = std::log(init_scale);
    p(n + 1) = f.value(std::vector<double>(init_center.begin(), init_center.end())) * std::pow(init_scale, e);
    p(n + 2) = 0.0;

    auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double lam = std::exp(q(n));
        const double amp = q(n + 1);
        const double le = std::pow(lam, -e);
        for (int i = 0; i < m; ++i) {
            double d2 = 0.0;
            for (int j = 0; j < n; ++j) d2 += (pts(i, j) - q(j)) * (pts(i, j) - q(j));
            const double qq = 1.0 + d2 / (lam * lam);
            const double base = le * std::pow(qq, -e);
            const double model = amp * base + q(n + 2);
            r(i) = w(i) * (data(i) - model);
            if (jac) {
                const double common = amp * le * std::pow(qq, -e - 1.0);
                for (int j = 0; j < n; ++j) (*jac)(i, j) = -w(i) * 2.0 * e * common * (pts(i, j) - q(j)) / (lam * lam);
                (*jac)(i, n) = -w(i) * (-e * amp * base + 2.0 * e * common * d2 / (lam * lam));
                (*jac)(i, n + 1) = -w(i) * base;
                (*jac)(i, n + 2) = -w(i);
            }
        }
    };

    Eigen::VectorXd r(m), r_try(m);
    Eigen::MatrixXd J(m, np);
    residuals(p, r, &J);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    FitResult best;
    auto pack = [&](const Eigen::VectorXd& q, double c, int it) {
        FitResult fr;
        fr.bubble.center.assign(q.data(), q.data() + n);
        fr.bubble.scale = std::exp(q(n));
        fr.bubble.amplitude = q(n + 1);
        fr.background = q(n + 2);
        fr.residual = std::sqrt(c / m);
        fr.iterations = it;
        return fr;
    };
    best = pack(p, cost, 0);
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Eigen::MatrixXd H = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool accepted = false;
        while (mu < 1e12) {
            Eigen::MatrixXd A = H;
            for (int j = 0; j < np; ++j) A(j, j) += mu * std::max(H(j, j), 1e-300);
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            const Eigen::VectorXd trial = p + step;
            residuals(trial, r_try, nullptr);
            const double c_try = r_try.squaredNorm();
            if (std::isfinite(c_try) && c_try < cost) {
                const double lam = std::exp(p(n));
                double size = std::abs(step(n));
                for (int j = 0; j < n; ++j) size = std::max(size, std::abs(step(j)) / lam);
                size = std::max(size, std::abs(step(n + 1)) / std::max(std::abs(p(n + 1)), 1e-300));
                const double drop = (cost - c_try) / std::max(cost, 1e-300);
                p = trial;
                cost = c_try;
                mu = std::max(mu / 3.0, 1e-12);
                accepted = true;
                residuals(p, r, &J);
                best = pack(p, cost, it);
                if (size < 1e-11 || drop < 1e-14) return best;
                break;
            }
            mu *= 4.0;
        }
        if (!accepted) {
            // no descent direction left: the current point is a minimum to working precision
            best.iterations = it;
            return best;
        }
    }
    throw FitFailure("bubble fit did not converge within " + std::to_string(opt.max_iter) + " iterations", best);
}

namespace {

struct Proposal {
    int n;
    std::vector<Bubble> comps;
    std::vector<double> broad_center;
    double broad_sigma;
    double comp_weight;
    double broad_weight;
    double t_norm;  // Gamma((nu+N)/2) / (Gamma(nu/2) pi^{N/2}), nu = N-2

    double density(std::span<const double> x) const {
        double q = 0.0;
        const double ex = -0.5 * (2.0 * n - 2.0);
        for (const Bubble& b : comps) {
            double y2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double y = (x[i] - b.center[i]) / b.scale;
                y2 += y * y;
            }
            q += comp_weight * t_norm * std::pow(1.0 + y2, ex) / std::pow(b.scale, n);
        }
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) d2 += (x[i] - broad_center[i]) * (x[i] - broad_center[i]);
        q += broad_weight * std::exp(-0.5 * d2 / (broad_sigma * broad_sigma)) /
             std::pow(2.0 * M_PI * broad_sigma * broad_sigma, 0.5 * n);
        return q;
    }
};

Proposal make_proposal(int n, const std::vector<Bubble>& around, std::span<const double> lo, std::span<const double> hi) {
    Proposal p;
    p.n = n;
    p.comps = around;
    p.broad_center.resize(n);
    double w = 0.0;
    for (int i = 0; i < n; ++i) {
        p.broad_center[i] = 0.5 * (lo[i] + hi[i]);
        w = std::max(w, 0.5 * (hi[i] - lo[i]));
    }
    p.broad_sigma = w;
    p.broad_weight = around.empty() ? 1.0 : 0.2;
    p.comp_weight = around.empty() ? 0.0 : 0.8 / around.size();
    const double nu = n - 2.0;
    p.t_norm = std::exp(log_gamma(0.5 * (nu + n)) - log_gamma(0.5 * nu) - 0.5 * n * std::log(M_PI));
    return p;
}

// Per-sample importance weights h_f(x)/q(x) for every field, row-major by sample.
std::vector<double> mc_samples(const std::vector<FieldOracle>& fields, const std::vector<Bubble>& around,
                               std::span<const double> lo, std::span<const double> hi, int samples,
                               std::uint64_t seed) {
    if (fields.empty()) return {};
    const int n = fields.front().n;
    const Proposal prop = make_proposal(n, around, lo, hi);
    const double p2 = critical_exponent(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::chi_squared_distribution<double> chi(n - 2.0);
    std::vector<double> out(static_cast<std::size_t>(samples) * fields.size());
    std::vector<double> x(n), g(n);
    for (int k = 0; k < samples; ++k) {
        const double pick = uni(rng);
        const double cut = prop.comp_weight * prop.comps.size();
        if (pick < cut) {
            const std::size_t c = std::min(prop.comps.size() - 1, static_cast<std::size_t>(pick / prop.comp_weight));
            const Bubble& b = prop.comps[c];
            const double sw = std::sqrt(chi(rng));
            for (int i = 0; i < n; ++i) x[i] = b.center[i] + b.scale * gauss(rng) / sw;
        } else {
            for (int i = 0; i < n; ++i) x[i] = prop.broad_center[i] + prop.broad_sigma * gauss(rng);
        }
        const double q = prop.density(x);
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const double u = fields[j].value(x);
            fields[j].gradient(x, g);
            const double h = 0.5 * norm_sq(g) - std::pow(std::abs(u), p2) / p2;
            out[k * fields.size() + j] = h / q;
        }
    }
    return out;
}

McEstimate summarize(const std::vector<double>& v) {
    McEstimate e;
    if (v.empty()) return e;
    const double m = static_cast<double>(v.size());
    double mean = 0.0, m2 = 0.0;
    std::size_t i = 0;
    for (double x : v) {
        ++i;
        const double d = x - mean;
        mean += d / static_cast<double>(i);
        m2 += d * (x - mean);
    }
    e.value = mean;
    e.std_error = v.size() > 1 ? std::sqrt(m2 / (m - 1.0) / m) : 0.0;
    return e;
}

}  // namespace

std::vector<McEstimate> mc_energies(const std::vector<FieldOracle>& fields, const std::vector<Bubble>& around,
                                    std::span<const double> box_lo, std::span<const double> box_hi, int samples,
                                    std::uint64_t seed) {
    const auto raw = mc_samples(fields, around, box_lo, box_hi, samples, seed);
    std::vector<McEstimate> out;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::vector<double> col(samples);
        for (int k = 0; k < samples; ++k) col[k] = raw[k * fields.size() + j];
        out.push_back(summarize(col));
    }
    return out;
}

ExtractionResult extract_all(const FieldOracle& f, int n, double s, int max_profiles, const QuadSpec& spec,
                             const ExtractOptions& opt, const FieldOracle* base) {
    const DimPair dim(n, s);
    if (f.n != n) throw DomainError("field dimension differs from N");
    if (max_profiles < 0) throw DomainError("max_profiles must be nonnegative");
    std::vector<double> lo = opt.box_lo.empty() ? std::vector<double>(n, -1.0) : opt.box_lo;
    std::vector<double> hi = opt.box_hi.empty() ? std::vector<double>(n, 1.0) : opt.box_hi;

    FieldOracle v = f;
    if (base) {
        v.value = [f, b = *base](std::span<const double> x) { return f.value(x) - b.value(x); };
        v.gradient = [f, b = *base, n](std::span<const double> x, std::span<double> g) {
            std::vector<double> t(n);
            f.gradient(x, g);
            b.gradient(x, t);
            for (int i = 0; i < n; ++i) g[i] -= t[i];
        };
    }
    const double beta = bubble_energy(n);
    ExtractionResult res;
    std::vector<Bubble> prof;
    int iter = 0;
    for (;; ++iter) {
        if (static_cast<int>(prof.size()) >= max_profiles) {
            res.stop_reason = "max_profiles reached";
            break;
        }
        const FieldOracle rf = subtract_bubbles(v, prof);
        const Detection det = detect_concentration(rf, lo, hi, opt.grid, opt.flat_tol);
        if (!det.found) {
            res.stop_reason = "flat field";
            break;
        }
        std::vector<Bubble> around = prof;
        around.push_back(Bubble{det.center, det.scale, 1.0});
        const McEstimate e =
            mc_energies({rf}, around, lo, hi, opt.samples, opt.seed + 1000003ULL * (iter + 1)).front();
        res.residual_trace.push_back(e);
        if (e.value < 0.5 * beta) {
            res.stop_reason = "residual energy below beta*/2";
            break;
        }
        FitOptions fo = opt.fit;
        fo.seed = opt.fit.seed + iter;
        try {
            const FitResult fr = fit_bubble(rf, det.center, det.scale, fo);
            prof.push_back(fr.bubble);
            res.fit_residuals.push_back(fr.residual);
        } catch (const FitFailure& ff) {
            res.partial = true;
            res.stop_reason = std::string("fit failure: ") + ff.what();
            break;
        }
    }
    for (int sweep = 0; sweep < opt.backfit_sweeps && prof.size() > 1; ++sweep) {
        for (std::size_t i = 0; i < prof.size(); ++i) {
            std::vector<Bubble> others;
            for (std::size_t j = 0; j < prof.size(); ++j)
                if (j != i) others.push_back(prof[j]);
            FitOptions fo = opt.fit;
            fo.seed = opt.fit.seed + 7919ULL * (sweep + 1) + i;
            try {
                const FitResult fr = fit_bubble(subtract_bubbles(v, others), prof[i].center, prof[i].scale, fo);
                prof[i] = fr.bubble;
                res.fit_residuals[i] = fr.residual;
            } catch (const FitFailure& ff) {
                res.partial = true;
                res.stop_reason += std::string("; refit failure: ") + ff.what();
            }
        }
    }
    // report profiles from the most concentrated outwards so the matrix layout does not depend on detection order
    std::vector<std::size_t> order(prof.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return prof[a].scale < prof[b].scale; });
    std::vector<double> fr_sorted;
    for (std::size_t i : order) {
        res.profiles.push_back(prof[i]);
        fr_sorted.push_back(res.fit_residuals[i]);
    }
    res.fit_residuals = fr_sorted;
    prof = res.profiles;

    std::vector<FieldOracle> fields = {v, subtract_bubbles(v, prof)};
    for (const Bubble& b : prof) fields.push_back(bubble_field(b));
    const auto raw = mc_samples(fields, prof, lo, hi, opt.samples, opt.seed);
    const std::size_t nf = fields.size();
    std::vector<double> c_in(opt.samples), c_res(opt.samples), c_gap(opt.samples);
    for (int k = 0; k < opt.samples; ++k) {
        const double* row = &raw[k * nf];
        c_in[k] = row[0];
        c_res[k] = row[1];
        double g = row[0] - row[1];
        for (std::size_t j = 2; j < nf; ++j) g -= row[j];
        c_gap[k] = g;
    }
    res.input_energy = summarize(c_in);
    res.residual_energy = summarize(c_res);
    res.additivity_gap = summarize(c_gap);
    res.residual_trace.push_back(res.residual_energy);

    double semi0 = std::numeric_limits<double>::quiet_NaN();
    if (n + 2.0 * s > 4.0 && !prof.empty()) semi0 = gagliardo_direct(radial_bubble(n), n, s, spec).value;
    for (const Bubble& b : prof) {
        res.profile_energies.push_back(profile_energy(b));
        res.profile_seminorms.push_back(b.amplitude * b.amplitude * seminorm_scale_factor(b.scale, s) * semi0);
    }
    res.separation.assign(prof.size(), std::vector<double>(prof.size(), 0.0));
    for (std::size_t i = 0; i < prof.size(); ++i)
        for (std::size_t j = 0; j < prof.size(); ++j) res.separation[i][j] = separation_stat(prof[i], prof[j]);
    return res;
}

}  // namespace critsob
