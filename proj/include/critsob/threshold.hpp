#pragma once

// The dimension-threshold inequality [u0]_s^2 < (2^{2/N} - 1) |grad u0|_2^2:
// the interpolation upper bound on the seminorm, the sufficient and exact
// predicates, threshold scans over N, and the large-N asymptotics.

#include <optional>
#include <string>
#include <vector>

#include "critsob/radial.hpp"
#include "critsob/specfn.hpp"

namespace critsob {

struct GMin {
    double ell;
    double value;
};

/// inf over l > 0 of A l^{-a} + B l^b in closed form, cross-checked against a
/// golden-section search in ln l (ConsistencyError beyond 1e-10 relative).
GMin g_min(double A, double B, double a, double b);

/// Same infimum by golden-section search only.
GMin g_min_numeric(double A, double B, double a, double b);

/// omega_{N-1} 2^{-s} / (s (1-s)) * (int u0^2)^{1-s} (int |grad u0|^2)^s, N >= 5.
double seminorm_upper_bound(const DimPair& dim);

/// (2^{2/N} - 1) int |grad u0|^2.
double threshold_rhs(int n);

enum class Truth { False, True, Indeterminate };
const char* to_string(Truth t);

/// A predicate "lhs < rhs" with the relative margin (rhs - lhs) / max(lhs, rhs) and its error bound.
/// Decided only when |margin| > 10 * error.
struct Verdict {
    Truth truth = Truth::Indeterminate;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;
    double error = 0;
};

Truth decide(double margin, double error);

/// The sufficient condition, evaluated three equivalent ways in log space
/// (bound vs rhs, the (.)^{1/(1-s)} <= |grad u0|^2 / |u0|_2^2 form, and the
/// same through R(N) S_N^2). Throws ConsistencyError if they disagree.
Verdict analytic_predicate(const DimPair& dim);

/// The exact inequality with [u0]_s^2 from both quadrature routes. Throws
/// UnreliableValue when the seminorm diverges or the routes differ by more than 1e-2.
struct ExactVerdict : Verdict {
    double direct = 0;
    double fourier = 0;
};
ExactVerdict exact_predicate(const DimPair& dim, const QuadSpec& spec);

enum class Mode { Analytic, Exact };
const char* to_string(Mode m);

struct BoundReport {
    int n = 0;
    double s = 0;
    std::optional<double> lhs_analytic;
    std::optional<double> lhs_exact;
    double rhs = 0;
    std::optional<Truth> predicate_analytic;
    std::optional<Truth> predicate_exact;
    std::optional<double> margin_analytic;
    std::optional<double> margin_exact;
    double error_estimate = 0;
    std::string status = "ok";  // "ok" or the error message for this cell
};

/// One cell of a scan; errors are recorded in `status`, never thrown.
BoundReport bound_report(const DimPair& dim, Mode mode, const QuadSpec& spec);

struct ThresholdRecord {
    double s = 0;
    Mode mode = Mode::Analytic;
    int n_lo = 0;
    int n_hi = 0;
    std::vector<BoundReport> table;
    /// Least N0 with the predicate true for every tested N in [N0, n_hi].
    std::optional<int> n0;
    /// True when the predicate holds, then fails, then holds again along the scan.
    bool non_monotone = false;
    bool any_error = false;
};

ThresholdRecord threshold_search(double s, Mode mode, int n_lo, int n_hi, const QuadSpec& spec,
                                 unsigned threads = 1);

/// R(N) = |grad u0|^2 / (|u0|_2^2 S_N^2) in the long Gamma form and the
/// duplication-simplified form.
struct RForms {
    double gamma_form;
    double simplified_form;
};
RForms r_of_n_forms(int n);
/// R(N); throws ConsistencyError if the two forms differ by more than 1e-10.
double r_of_n(int n);

struct AsymptoticRow {
    int n;
    double omega_ratio;  // omega_{N-1} / (2^{2/N} - 1)
    double sobolev;      // S_N
    double bound_ratio;  // lhs / rhs of the sufficient condition (NaN below N = 5)
    // Base-10 logs of the two ratios; they leave the double range near N = 250.
    double log10_omega_ratio;
    double log10_bound_ratio;
};

struct AsymptoticTable {
    double s = 0.5;
    std::vector<AsymptoticRow> rows;
    bool omega_small_from_80 = false;  // omega_ratio < 1e-6 for every N >= 80
    bool sobolev_increasing = false;
    bool ratio_decreasing_tail = false;  // strictly decreasing on the upper half of the scan
    double log10_ratio_last = 0;
};

AsymptoticTable asymptotic_scan(int n_hi, double s = 0.5);

struct LevelQuotient {
    double quotient;
    double level;  // 2^{2/N} S_N
    bool below;
};

/// (|grad u0|^2 + (1-t)^{2-2s} [u0]_s^2) / |u0|_{2*}^2 with the seminorm from
/// the analytic bound or from quadrature.
LevelQuotient level_quotient(const DimPair& dim, double t, Mode mode, const QuadSpec& spec);

}  // namespace critsob
