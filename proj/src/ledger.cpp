#include "critsob/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "critsob/errors.hpp"
#include "critsob/quad.hpp"

namespace critsob {

EnergyReport energy_local(const RadialFn& u, const DimPair& dim, const QuadSpec& spec, double lambda) {
    const int n = dim.n();
    EnergyReport r;
    if (u.empty_support()) return r;
    const QuadResult g = gradient_energy(u, n, spec);
    const QuadResult sn = gagliardo_direct(u, n, dim.s(), spec);
    const QuadResult c = power_energy(u, n, dim.two_star(), spec);
    r.quadratic = 0.5 * (g.value + sn.value);
    r.quadratic_error = 0.5 * (g.error + sn.error);
    if (lambda != 0.0) {
        const QuadResult m = power_energy(u, n, 2.0, spec);
        r.mass = 0.5 * lambda * m.value;
        r.mass_error = 0.5 * std::abs(lambda) * m.error;
    }
    r.critical = c.value / dim.two_star();
    r.critical_error = c.error / dim.two_star();
    r.total = r.quadratic - r.mass - r.critical;
    return r;
}

EnergyReport energy_local(const Bubble& b, const DimPair& dim, const QuadSpec& spec, double lambda) {
    b.validate();
    if (b.dim() != dim.n()) throw DomainError("bubble dimension differs from N");
    return energy_local(radial_bubble(dim.n(), b.scale, b.amplitude), dim, spec, lambda);
}

QuadResult energy_infty(const RadialFn& u, int n, const QuadSpec& spec) {
    if (u.empty_support()) return {};
    const double p = critical_exponent(n);
    QuadResult g = gradient_energy(u, n, spec);
    QuadResult c = power_energy(u, n, p, spec);
    QuadResult out;
    out.value = 0.5 * g.value - c.value / p;
    out.error = 0.5 * g.error + c.error / p;
    out.evaluations = g.evaluations + c.evaluations;
    out.converged = g.converged && c.converged;
    return out;
}

double bubble_energy(int n) {
    if (n < 3) throw DomainError("bubble energy needs N >= 3");
    return std::exp(0.5 * n * log_sobolev_constant(n)) / n;
}

QuadResult bubble_energy_quadrature(int n, const QuadSpec& spec) {
    return energy_infty(radial_bubble(n, 1.0, solution_amplitude(n)), n, spec);
}

double solution_residual(int n, double amplitude) {
    const RadialFn u = radial_bubble(n, 1.0, amplitude);
    const double p = critical_exponent(n) - 1.0;
    double worst = 0.0;
    for (double r : {0.1, 0.3, 0.7, 1.0, 1.5, 2.5, 4.0, 8.0}) {
        const double h = 1e-4 * r;
        const double um = u.value(r - h), u0 = u.value(r), up = u.value(r + h);
        const double lap = (up - 2.0 * u0 + um) / (h * h) + (n - 1) / r * (up - um) / (2.0 * h);
        const double rhs = std::pow(u0, p);
        worst = std::max(worst, std::abs(lap + rhs) / rhs);
    }
    return worst;
}

double profile_energy(const Bubble& b) {
    b.validate();
    const int n = b.dim();
    const double a = solution_amplitude(n);
    if (std::abs(b.amplitude - a) <= 1e-12 * a) return bubble_energy(n);
    const double p = critical_exponent(n);
    const double c = std::abs(b.amplitude);
    return 0.5 * c * c * bubble_grad_sq(n) - std::pow(c, p) * bubble_lcrit(n) / p;
}

double ps_level(const ProfileSet& ps, int n) {
    double total = ps.base_energy;
    for (const Bubble& b : ps.profiles) {
        if (b.dim() != n) throw DomainError("profile dimension differs from N");
        total += profile_energy(b);
    }
    return total;
}

QuadResult ps_level_quadrature(const ProfileSet& ps, int n, const QuadSpec& spec) {
    QuadResult total;
    total.value = ps.base_energy;
    for (const Bubble& b : ps.profiles) {
        b.validate();
        if (b.dim() != n) throw DomainError("profile dimension differs from N");
        total += energy_infty(radial_bubble(n, b.scale, b.amplitude), n, spec);
    }
    return total;
}

std::pair<double, double> coron_window(int n) {
    const double b = bubble_energy(n);
    return {b, 2.0 * b};
}

double separation_stat(const Bubble& i, const Bubble& j) {
    if (!(i.scale > 0.0 && j.scale > 0.0)) throw DomainError("scales must be positive");
    if (i.center.size() != j.center.size()) throw DomainError("bubble dimensions differ");
    double d2 = 0.0;
    for (std::size_t k = 0; k < i.center.size(); ++k) {
        const double d = i.center[k] - j.center[k];
        d2 += d * d;
    }
    return std::abs(std::log(i.scale / j.scale)) + std::sqrt(d2) / i.scale;
}

IdentityReport sign_changing_identity(const RadialFn& u_plus, const RadialFn& u_minus, const DimPair& dim,
                                      const QuadSpec& spec) {
    const int n = dim.n();
    const double s = dim.s();
    IdentityReport r;
    r.cross = cross_term(u_plus, u_minus, n, s, spec).value;
    const RadialFn u = difference(u_plus, u_minus);
    r.direct = energy_local(u, dim, spec).total;
    const EnergyReport ep = energy_local(u_plus, dim, spec);
    const EnergyReport em = energy_local(u_minus, dim, spec);
    r.split = ep.quadratic + em.quadratic + 2.0 * r.cross - ep.critical - em.critical;
    r.residual = std::abs(r.direct - r.split) / std::abs(r.direct);
    return r;
}

std::vector<double> center_of_mass(const Bubble& b, double R, const QuadSpec& spec) {
    b.validate();
    if (std::isinf(R)) return b.center;
    if (!(R >= 1.0)) throw DomainError("cutoff radius R must be >= 1");
    const int n = b.dim();
    const double d = std::sqrt(std::inner_product(b.center.begin(), b.center.end(), b.center.begin(), 0.0));
    std::vector<double> axis(n, 0.0);
    if (d > 0.0) {
        for (int k = 0; k < n; ++k) axis[k] = b.center[k] / d;
    } else {
        axis[0] = 1.0;
    }
    const double lam = b.scale;
    const double e = 0.5 * (n - 2);
    const double amp = b.amplitude * std::pow(lam, -e);
    auto grad_sq = [=](double r, double th) {
        const double c = std::cos(th);
        const double d2 = std::max(0.0, r * r + d * d - 2.0 * r * d * c);
        const double q = 1.0 + d2 / (lam * lam);
        const double u = amp * std::pow(q, -e);
        const double g = -(n - 2) * u / (q * lam * lam);
        const double phi = cutoff_radial(R, r);
        const double dphi = cutoff_radial_derivative(R, r);
        return dphi * dphi * u * u + 2.0 * phi * dphi * u * g * (r - d * c) + phi * phi * g * g * d2;
    };
    HalfLineHints h;
    h.support_lo = 0.25 / R;
    h.support_hi = 4.0 * R;
    h.scale = std::max(lam, h.support_lo);
    h.breakpoints = {0.25 / R, 0.5 / R, 1.0 / R, R, 2.0 * R, 4.0 * R};
    for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        const double r = d + k * lam;
        if (r > 0.0) h.breakpoints.push_back(r);
    }
    std::sort(h.breakpoints.begin(), h.breakpoints.end());
    auto breaks = [d, lam](double r) {
        std::vector<double> out;
        if (d > 0.0 && r > 0.0) {
            for (double k : {0.3, 1.0, 3.0, 10.0}) out.push_back(k * lam / std::max(r, d));
        }
        return out;
    };
    const QuadResult den = axisymmetric_integral(grad_sq, n, h, breaks, spec);
    const QuadResult num = axisymmetric_integral(
        [&grad_sq](double r, double th) { return r * std::cos(th) * grad_sq(r, th); }, n, h, breaks, spec);
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = axis[k] * num.value / den.value;
    return f;
}

}  // namespace critsob
