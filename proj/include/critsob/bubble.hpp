#pragma once

// Aubin-Talenti bubbles U[z, lambda](x) = c lambda^{-(N-2)/2} (1 + |x-z|^2/lambda^2)^{-(N-2)/2},
// their closed-form norms, and the radial cutoff family phi_R.

#include <span>
#include <vector>

#include "critsob/integrate.hpp"
#include "critsob/radial.hpp"

namespace critsob {

struct Bubble {
    std::vector<double> center;  // dimension N = center.size()
    double scale = 1.0;
    double amplitude = 1.0;

    int dim() const { return static_cast<int>(center.size()); }
    /// Throws DomainError unless N >= 3, scale > 0 and amplitude != 0.
    void validate() const;
};

double eval_bubble(const Bubble& b, std::span<const double> x);
std::vector<double> bubble_gradient(const Bubble& b, std::span<const double> x);

/// u_t^sigma: the unit-amplitude bubble centered at t sigma with scale 1 - t.
struct CoronParams {
    double t = 0.0;
    std::vector<double> sigma;

    /// Throws DomainError unless 0 <= t < 1 and |sigma| = 1 to 1e-12.
    void validate() const;
    Bubble to_bubble() const;
};

/// (N(N-2))^{(N-2)/4}: the amplitude that makes the bubble solve -Lap U = U^{2*-1}.
double solution_amplitude(int n);

/// Smooth monotone step on [0, 1]: q(x) / (q(x) + q(1-x)) with q(x) = exp(-1/x).
double smooth_step(double x);
double smooth_step_derivative(double x);

/// Base profile: 0 below 1/4, ramp up on [1/4, 1/2], 1 on [1/2, 2], ramp down on [2, 4], 0 beyond.
double cutoff_base(double rho);
double cutoff_base_derivative(double rho);

struct Cutoff {
    double R = 1.0;
};

/// phi_R as a function of |x|, and its radial derivative.
double cutoff_radial(double R, double r);
double cutoff_radial_derivative(double R, double r);
double eval_cutoff(const Cutoff& c, std::span<const double> x);

/// int u0^2 for N >= 5 (DivergenceError otherwise).
double bubble_l2_sq(int n);
/// int u0^{2*}.
double bubble_lcrit(int n);
/// int |grad u0|^2 = S_N (int u0^{2*})^{2/2*}.
double bubble_grad_sq(int n);

/// lambda^{2-2s}: [U[z, lambda]]_s^2 / [u0]_s^2.
double seminorm_scale_factor(double lambda, double s);

/// Radial profile of amplitude * U[0, lambda] with its exact transform.
RadialFn radial_bubble(int n, double lambda = 1.0, double amplitude = 1.0);

/// phi_R(r) * amplitude * U[0, lambda](r): compactly supported on [1/(4R), 4R].
RadialFn truncated_bubble(int n, double R, double lambda = 1.0, double amplitude = 1.0);

/// |grad((phi_R - 1) u)|^2 + |(phi_R - 1) u|^2 integrated over R^N for u = u_t^sigma.
/// The integrand vanishes on the plateau 1/(2R) <= |x| <= 2R.
QuadResult truncation_error(int n, const CoronParams& p, double R, const QuadSpec& spec);

}  // namespace critsob
