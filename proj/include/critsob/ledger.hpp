#pragma once

// Energy functionals and the level arithmetic of bubble decompositions:
// I_{lambda,s}, I_inf, the single-bubble level beta* = S_N^{N/2}/N, the
// window (beta*, 2 beta*), the separation statistic, the sign-split energy
// identity and the center-of-mass map.

#include <limits>
#include <utility>
#include <vector>

#include "critsob/bubble.hpp"
#include "critsob/integrate.hpp"
#include "critsob/radial.hpp"
#include "critsob/specfn.hpp"

namespace critsob {

struct EnergyReport {
    double total = 0;
    double quadratic = 0;  // (|grad u|^2 + [u]_s^2) / 2
    double mass = 0;       // lambda |u|_2^2 / 2
    double critical = 0;   // |u|_{2*}^{2*} / 2*
    double quadratic_error = 0;
    double mass_error = 0;
    double critical_error = 0;
    double error() const { return quadratic_error + mass_error + critical_error; }
};

/// I_{lambda,s}(u) = quadratic - mass - critical for a radial u on R^N.
EnergyReport energy_local(const RadialFn& u, const DimPair& dim, const QuadSpec& spec, double lambda = 0.0);
/// The same for a bubble (translation invariance lets it be evaluated centered).
EnergyReport energy_local(const Bubble& b, const DimPair& dim, const QuadSpec& spec, double lambda = 0.0);

/// I_inf(u) = |grad u|^2 / 2 - |u|_{2*}^{2*} / 2*.
QuadResult energy_infty(const RadialFn& u, int n, const QuadSpec& spec);

/// beta* = S_N^{N/2} / N.
double bubble_energy(int n);

/// I_inf of the solution-normalized bubble by quadrature.
QuadResult bubble_energy_quadrature(int n, const QuadSpec& spec);

/// max over sampled r of |Lap U + U^{2*-1}| / U^{2*-1} for amplitude * u0, with
/// the Laplacian from finite differences of the profile.
double solution_residual(int n, double amplitude);

struct ProfileSet {
    double base_energy = 0.0;
    std::vector<Bubble> profiles;
    double lambda = 0.0;
};

/// Energy of one profile: beta* for a solution-normalized bubble, otherwise
/// c^2 |grad u0|^2 / 2 - |c|^{2*} |u0|_{2*}^{2*} / 2* from the closed forms.
double profile_energy(const Bubble& b);

/// base + sum of profile energies.
double ps_level(const ProfileSet& ps, int n);
/// The same with every profile energy from quadrature.
QuadResult ps_level_quadrature(const ProfileSet& ps, int n, const QuadSpec& spec);

/// (beta*, 2 beta*).
std::pair<double, double> coron_window(int n);

/// |log(lambda_i / lambda_j)| + |z_i - z_j| / lambda_i. Not symmetric in (i, j).
double separation_stat(const Bubble& i, const Bubble& j);

struct IdentityReport {
    double direct = 0;  // I_{0,s}(u+ - u-) evaluated on the difference
    double split = 0;   // the same assembled from the parts and the cross term
    double cross = 0;
    double residual = 0;  // |direct - split| / |direct|
};

/// Compares I_{0,s}(u+ - u-) with
/// |grad u+|^2/2 + |grad u-|^2/2 + [u+]^2/2 + [u-]^2/2 + 2 cross - (|u+|^{2*} + |u-|^{2*})/2*.
/// Throws UnsupportedInput unless the radial supports are separated.
IdentityReport sign_changing_identity(const RadialFn& u_plus, const RadialFn& u_minus, const DimPair& dim,
                                      const QuadSpec& spec);

/// F(u) = int x |grad u|^2 / int |grad u|^2 for u = phi_R * U[z, lambda] (R >= 1),
/// or for the bare bubble when R is infinite (then F = z by odd symmetry).
std::vector<double> center_of_mass(const Bubble& b, double R, const QuadSpec& spec);

}  // namespace critsob
