#pragma once

// Text serialization shared by the command line and the acceptance suite:
// number formatting, CSV tables, atomic file writes and golden-table diffs.

#include <optional>
#include <string>
#include <vector>

#include "critsob/threshold.hpp"

namespace critsob {

/// Shortest round-trip-stable rendering used in every table ("%.12g"; "nan", "inf").
std::string fmt_num(double v);
std::string fmt_num(const std::optional<double>& v);  // empty when unset

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Splits one CSV line, honoring quoted fields.
std::vector<std::string> csv_split(const std::string& line);

/// Columns: N,s,mode,lhs_analytic,lhs_exact,rhs,predicate_analytic,predicate_exact,
/// margin_analytic,margin_exact,error_estimate,status.
std::string threshold_csv(const std::vector<ThresholdRecord>& records);

/// Per-s summary: s,mode,n_lo,n_hi,n0,non_monotone,any_error.
std::string threshold_summary_csv(const std::vector<ThresholdRecord>& records);

/// Empty when the tables have the same shape, identical non-numeric fields and
/// numeric fields within rel_tol; otherwise a description of the first mismatch.
std::string csv_diff(const std::string& expected, const std::string& actual, double rel_tol);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// Whole file as a string; nullopt when it cannot be opened.
std::optional<std::string> read_file(const std::string& path);

}  // namespace critsob
