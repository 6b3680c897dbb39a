#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "hillmaslov/hill.hpp"
#include "hillmaslov/linalg.hpp"
#include "hillmaslov/matrix.hpp"

namespace hillmaslov {

enum class Axis { lambda, s };
enum class FormKind { lambda_form, s_form };

// A parameter value where the boundary-value problem has nontrivial kernel,
// equivalently where e^{i*theta} is an eigenvalue of the interval propagator.
struct CrossingRecord {
  Axis axis = Axis::lambda;
  double lambda = 0.0;
  double s = 0.0;
  int normalized_multiplicity = 0;  // real kernel dimension / 2
  // columns: real kernel basis of realify(M) - boundary_rotation(theta);
  // each column is boundary data at x = -s with interleaved (Re, Im) pairs
  Matrix kernel;
  Matrix gram;  // crossing form on the kernel basis
  Signature signature;
  FormKind form_kind = FormKind::lambda_form;
  bool at_endpoint = false;         // within endpoint_tol of a scan bound
  bool continuity_flagged = false;  // potential jumps at +-s (s-axis forms)

  double location() const { return axis == Axis::lambda ? lambda : s; }
};

struct ScanSettings {
  int grid = 2000;                   // top-level grid cells per axis
  double refine_tol = 1e-9;          // parameter-space refinement width
  double indicator_threshold = 0.05; // candidate cut on the indicator
  double kernel_tol = 1e-6;          // singular-value cut for kernels (see multiplicity_at)
  double endpoint_tol = 1e-6;        // range-endpoint proximity flag
  int max_subdivide_depth = 8;       // recursive cell subdivision limit
  int subdivide_grid = 16;           // cells per subdivision level
  double form_rank_tol = 1e-8;       // signature cut, relative to the gram scale

  bool operator==(const ScanSettings&) const = default;
};

// Reusable propagator grids: the interval propagator does not depend on the
// twist angle, so scans that differ only in theta share the expensive part.
// Only use one cache per (potential, integrator settings) pair.
class ScanCache {
 public:
  const std::vector<Matrix>& grid_propagators(const HillProblem& problem, Axis axis,
                                              double fixed, double lo, double hi,
                                              int grid);

 private:
  std::map<std::tuple<int, int, int, double, double, double, int>, std::vector<Matrix>> store_;
};

// Smallest singular value of realify(M(s, lambda)) - boundary_rotation(theta):
// nonnegative, zero exactly at crossings.
double crossing_indicator(const HillProblem& problem, double lambda, double s);

struct MultiplicityResult {
  int normalized_multiplicity = 0;
  Matrix kernel;  // 4n x (2 * multiplicity)
};

// Kernel of realify(M) - boundary_rotation(theta); throws NumericalError if
// the real kernel dimension is odd (tolerance failure).  Singular values
// below max(kernel_tol, 1e-10 * sigma_max) count as kernel: the absolute
// floor (natural scale: the rotation has norm 1) keeps tangential crossings
// visible where the whole difference collapses to rounding noise, and the
// sigma_max term absorbs integrator noise when the propagator carries large
// hyperbolic components.
MultiplicityResult multiplicity_at(const HillProblem& problem, double lambda, double s,
                                   double kernel_tol = 1e-6);

// Scan along lambda at fixed s (respectively along s at fixed lambda) for
// crossings in [lo, hi].  Records are complete: location, multiplicity,
// kernel, crossing form, signature, flags; ascending in the parameter.
std::vector<CrossingRecord> find_crossings_lambda(const HillProblem& problem, double s,
                                                  double lo, double hi,
                                                  const ScanSettings& settings = {},
                                                  ScanCache* cache = nullptr);
std::vector<CrossingRecord> find_crossings_s(const HillProblem& problem, double lambda,
                                             double lo, double hi,
                                             const ScanSettings& settings = {},
                                             ScanCache* cache = nullptr);

// Crossing form along lambda on the record's kernel basis:
// Q(v_i, v_j) = -integral over [-s, s] of <p_i(x), p_j(x)>, with p the
// position part of the trajectory re-integrated from the boundary data.
Matrix crossing_form_lambda(const HillProblem& problem, const CrossingRecord& record);

// Crossing form along s on boundary data v = (p, q) at x = -s:
// Q(v_i, v_j) = 2<p_i, (avg V at +-s (x) I_2 - lambda I) p_j> + 2<q_i, q_j>.
Matrix crossing_form_s(const HillProblem& problem, const CrossingRecord& record);

}  // namespace hillmaslov
