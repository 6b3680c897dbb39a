#pragma once

#include <string>

#include "hillmaslov/maslov.hpp"
#include "hillmaslov/run_config.hpp"

namespace hillmaslov {

// Command implementations behind the command-line tool.  Each returns its
// output as a string so the callers decide where it goes; all numeric CSV
// fields use at most 12 significant digits with '.' as the decimal separator,
// never NaN (failed rows carry a status column instead), and reruns with the
// same configuration produce byte-identical output.

// Spectral-parameter scan at the full half-period: one row per grid node and
// one per detected crossing, ascending.  Columns:
//   lambda, indicator, is_crossing, multiplicity, form_values, status
// form_values holds the crossing-form eigenvalues, ';'-separated.
std::string run_scan_lambda_csv(const RunConfig& config);

// Interval-length scan at fixed lambda (config.lambda, default 0) from the
// bottom-edge height to the half-period; same shape with a leading s column.
// At twists 0 and 2 pi without an explicit s0 the bottom-edge height search
// runs first and a failure raises NumericalError.
std::string run_scan_s_csv(const RunConfig& config);

struct SweepCsvs {
  std::string eigenvalues;       // theta, branch, lambda, status
  std::string conjugate_points;  // theta, branch, s, status
  std::string form_values;       // theta, branch, s, form_value, status
  bool all_ok = false;           // every row passed its identities, no flags
};

// Twist sweep over theta_points values covering [0, 2 pi]: eigenvalue
// branches, conjugate-point branches, and the conjugate-point crossing-form
// values, one table each.
SweepCsvs run_sweep_theta_csv(const RunConfig& config);

struct VerifyOutput {
  std::string text;   // human-readable report
  std::string table;  // identity, lhs, rhs, residual, applicable, passed
  bool passed = false;
};

// Full rectangle report with every index identity evaluated.
VerifyOutput run_verify(const RunConfig& config);

}  // namespace hillmaslov
