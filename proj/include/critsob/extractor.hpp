#pragma once

// Synthetic bubble-decomposition sequences and a detect / fit / subtract
// extraction loop that only sees pointwise values (and gradients for the
// energy estimates) of the field.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "critsob/bubble.hpp"
#include "critsob/radial.hpp"

namespace critsob {

/// A scalar field on R^N given pointwise.
struct FieldOracle {
    int n = 0;
    std::function<double(std::span<const double>)> value;
    std::function<void(std::span<const double>, std::span<double>)> gradient;
};

/// f - sum of bubbles.
FieldOracle subtract_bubbles(const FieldOracle& f, const std::vector<Bubble>& bubbles);
FieldOracle bubble_field(const Bubble& b);

/// z(k) = center + drift * ln k, lambda(k) = c / k, amplitude fixed.
struct BubbleSchedule {
    std::vector<double> center;
    std::vector<double> drift;  // empty means no drift
    double c = 1.0;
    double amplitude = 0.0;  // 0 selects the solution normalization
    Bubble at(int n, double k) const;
};

struct SyntheticSpec {
    int n = 5;
    bool base_on = false;
    double base_amplitude = 0.5;  // base profile: smooth bump of radius base_radius at the origin
    double base_radius = 2.0;
    std::vector<BubbleSchedule> bubbles;
    double remainder = 1e-2;  // epsilon_k = remainder / k times a fixed bump
    std::vector<double> remainder_center;  // empty means the origin
    double remainder_radius = 0.3;

    /// Throws DomainError unless N in {3, 4, 5}, every c > 0 and all vectors have N entries.
    void validate() const;
};

/// Two ground bubbles with lambda_i = c_i / k, c = (1, 1.5), in N = 5, centered at
/// -+(0.5 + 0.05 ln k) e_1.
SyntheticSpec default_two_bubble();

/// The field u_k: base (if on) + sum of scheduled bubbles + epsilon_k bump.
FieldOracle make_ps_sequence(const SyntheticSpec& spec, double k);
/// Scheduled bubbles at index k (ground truth for diagnostics).
std::vector<Bubble> scheduled_bubbles(const SyntheticSpec& spec, double k);
/// The base profile alone (the zero field when base_on is false).
FieldOracle base_field(const SyntheticSpec& spec);

struct Detection {
    bool found = false;
    std::vector<double> center;
    double scale = 0.0;
    double peak = 0.0;
    int levels = 0;
};

/// Zooming grid search for the largest |f| in a box (grid^N points per level,
/// the box halves around the argmax each level), then the half-height radius
/// r = lambda sqrt(2^{2/(N-2)} - 1), the median over the 2N axis directions.
/// found = false when max |f| on the first grid is below flat_tol.
Detection detect_concentration(const FieldOracle& f, std::span<const double> box_lo, std::span<const double> box_hi,
                               int grid = 9, double flat_tol = 1e-8);

/// Half-height radius of a bubble of scale lambda in dimension N.
double half_height_radius(int n, double lambda);

struct FitOptions {
    int cloud = 600;
    int max_iter = 200;
    std::uint64_t seed = 7;
};

struct FitResult {
    Bubble bubble;
    double background = 0.0;  // fitted constant offset
    double residual = 0.0;    // weighted RMS misfit relative to the data
    int iterations = 0;
};

class FitFailure : public std::runtime_error {
public:
    FitFailure(const std::string& what, FitResult best) : std::runtime_error(what), best_(std::move(best)) {}
    const FitResult& best() const noexcept { return best_; }

private:
    FitResult best_;
};

/// Levenberg-Marquardt fit of (z, ln lambda, amplitude, offset) over a seeded
/// cloud of sample points at scales lambda/2, lambda and 3 lambda around init_center.
FitResult fit_bubble(const FieldOracle& f, std::span<const double> init_center, double init_scale,
                     const FitOptions& opt = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct ExtractOptions {
    std::vector<double> box_lo;  // default [-1, 1]^N
    std::vector<double> box_hi;
    int grid = 9;
    double flat_tol = 1e-8;
    int samples = 200000;
    std::uint64_t seed = 20240607;
    int backfit_sweeps = 2;
    FitOptions fit;
};

struct ExtractionResult {
    std::vector<Bubble> profiles;  // ascending scale
    std::vector<double> fit_residuals;
    std::vector<double> profile_energies;  // closed-form I_inf of each profile
    std::vector<double> profile_seminorms; // [profile]_s^2 (NaN when infinite)
    McEstimate input_energy;               // I_inf(u - base)
    McEstimate residual_energy;            // I_inf(u - base - profiles)
    McEstimate additivity_gap;             // I_inf(input) - sum I_inf(profiles) - I_inf(residual)
    /// Residual I_inf before each subtraction, then after the last one.
    std::vector<McEstimate> residual_trace;
    std::vector<std::vector<double>> separation;
    bool partial = false;
    std::string stop_reason;
};

/// I_inf of each field by importance sampling around the given bubbles plus a
/// broad Gaussian; the same samples serve every field.
std::vector<McEstimate> mc_energies(const std::vector<FieldOracle>& fields, const std::vector<Bubble>& around,
                                    std::span<const double> box_lo, std::span<const double> box_hi, int samples,
                                    std::uint64_t seed);

/// Repeated detect -> fit -> subtract until the residual I_inf drops below
/// beta*/2, the field is flat, or max_profiles profiles were taken. `base`
/// (optional) is subtracted first. Fit failures stop the loop with partial = true.
ExtractionResult extract_all(const FieldOracle& f, int n, double s, int max_profiles, const QuadSpec& spec,
                             const ExtractOptions& opt = {}, const FieldOracle* base = nullptr);

}  // namespace critsob
