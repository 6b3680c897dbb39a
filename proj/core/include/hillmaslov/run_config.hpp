#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hillmaslov/crossings.hpp"
#include "hillmaslov/hill.hpp"
#include "hillmaslov/potential.hpp"

namespace hillmaslov {

// One run of a command-line tool, as a flat key/value configuration.  The
// same struct backs the config-file format and the command-line flags: a run
// starts from defaults, merges an optional config file, then merges explicit
// flags on top.
//
// File format: INI-style sections with one `key = value` pair per line.
// Blank lines and lines starting with '#' or ';' are ignored.  A `command`
// key may appear before the first section header.  Sections and keys:
//
//   [problem]    preset, theta, lambda_max, s0, half_period,
//                dimension, potential_matrix
//   [integrator] steps_per_period, check_tol
//   [scan]       grid, refine_tol, indicator_threshold, kernel_tol,
//                endpoint_tol, max_subdivide_depth, subdivide_grid,
//                form_rank_tol, lambda, theta_points
//   [output]     path
//
// Presets:
//   mathieu           3.2 cos(2x) on [-pi, pi] (scalar)
//   free              the zero scalar potential
//   constant:<list>   constant diagonal matrix with the listed entries
//   matrix            constant symmetric matrix from `dimension` and the
//                     row-major `potential_matrix` list
//
// serialize_config writes every field with shortest round-trip number
// formatting, so parse(serialize(parse(text))) == parse(text) exactly.
struct RunConfig {
  // command: scan-lambda | scan-s | sweep-theta | verify (empty = unset)
  std::string command;

  // [problem]
  std::string preset = "mathieu";
  double theta = 0.0;
  std::optional<double> lambda_max;    // spectral ceiling override
  std::optional<double> s0;            // bottom-edge height override
  std::optional<double> half_period;   // constant-family presets only
  int dimension = 0;                   // rows of potential_matrix (matrix preset)
  std::vector<double> potential_matrix;  // row-major entries (matrix preset)

  // [integrator]
  IntegratorSettings integrator;

  // [scan]
  ScanSettings scan;
  double lambda = 0.0;      // fixed spectral parameter for scan-s
  int theta_points = 201;   // twist grid size for sweep-theta, over [0, 2 pi]

  // [output]
  std::string out;  // file path, or prefix for sweep-theta; empty = stdout

  bool operator==(const RunConfig&) const = default;
};

// Parses config text; throws ConfigError with a line number on malformed
// lines, unknown sections or keys, duplicate keys, or bad values.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file; throws ConfigError if unreadable.
RunConfig load_config(const std::string& path);

// Writes the full configuration; round-trips exactly through parse_config.
std::string serialize_config(const RunConfig& config);

// Builds the potential for the configured preset; throws ConfigError on an
// unknown preset or inconsistent matrix data.
PotentialSpec config_potential(const RunConfig& config);

// Builds the Hill problem: preset potential, twist reduced modulo 2 pi into
// [0, 2 pi] (explicit 0 and 2 pi are preserved), and the configured
// lambda_max / s0 / integrator overrides.
HillProblem make_problem(const RunConfig& config);

}  // namespace hillmaslov
