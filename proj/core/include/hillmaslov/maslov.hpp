#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hillmaslov/crossings.hpp"
#include "hillmaslov/hill.hpp"

namespace hillmaslov {

// The boundary of the scan rectangle [0, lambda_max] x [s0, L] in the
// (lambda, s) plane, walked counterclockwise:
//   bottom: lambda 0 -> lambda_max     at s = s0
//   right:  s      s0 -> L             at lambda = lambda_max
//   top:    lambda lambda_max -> 0     at s = L
//   left:   s      L -> s0             at lambda = 0
// Top-edge crossings are the twist eigenvalues, left-edge crossings the
// conjugate points.
enum class Edge { bottom = 0, right = 1, top = 2, left = 3 };

const char* edge_name(Edge which);

struct EdgeGeometry {
  Axis axis = Axis::lambda;
  double fixed = 0.0;   // the frozen coordinate (s for lambda scans and vice versa)
  double lo = 0.0;      // scan interval, ascending
  double hi = 0.0;
  int orientation = 1;  // +1 when the walk increases the scan parameter, else -1
};

EdgeGeometry edge_geometry(const HillProblem& problem, Edge which, double s0);

// One edge of the walk: its crossings, the signed index accumulated from
// crossing-form signatures, and the unsigned multiplicity count.  Both are in
// normalized units (real dimensions halved) and are exact half-integers:
// an interior crossing contributes orientation * (n_plus - n_minus) / 2 to
// the index and its normalized multiplicity to the count; a crossing at an
// interval endpoint contributes with half weight.
struct CurveSummary {
  Edge which = Edge::bottom;
  EdgeGeometry geometry;
  std::vector<CrossingRecord> crossings;
  double index = 0.0;  // zeroed and meaningless when !regular
  double count = 0.0;
  bool regular = true;  // false when some crossing form is degenerate
};

CurveSummary edge_summary(const HillProblem& problem, Edge which, double s0,
                          const ScanSettings& settings = {},
                          ScanCache* cache = nullptr);

// Number of eigenvalues of a symmetric matrix above tol * max(1, |v|_max).
// Throws std::invalid_argument if v is not symmetric and NumericalError if an
// eigenvalue sits within the tolerance band around zero.
int morse_index_matrix(const Matrix& v, double tol = 1e-9);

// Number of twist eigenvalues in (0, lambda_max], with multiplicity: the
// top-edge count.  Throws NumericalError if zero is an eigenvalue within
// tolerance (perturb the twist) or if the count fails to be an integer
// (eigenvalue at the lambda ceiling).
int morse_index_theta(const HillProblem& problem, const ScanSettings& settings = {},
                      ScanCache* cache = nullptr);

// One verified identity between edge indices, counts, and Morse indices.
// residual() is exact: every quantity involved is a half-integer.
struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;  // hypotheses hold for this problem
  bool passed = false;     // meaningful only when applicable

  double residual() const { return lhs - rhs; }
};

struct MaslovReport {
  double theta = 0.0;       // twist actually used (see notes on perturbation)
  double s0 = 0.0;
  double lambda_max = 0.0;
  std::array<CurveSummary, 4> edges;  // indexed by Edge
  int morse = -1;                     // twist Morse index; -1 when undefined
  std::optional<int> morse_v0;        // matrix Morse index of V(0)
  std::vector<IdentityCheck> identities;
  std::vector<std::string> notes;  // benign annotations (e.g. twist perturbed)
  std::vector<std::string> flags;  // failures and unresolved degeneracies

  const CurveSummary& edge(Edge which) const {
    return edges[static_cast<int>(which)];
  }
  // Every applicable identity passed and no failure flags were raised.
  bool all_passed() const;
};

struct ReportOptions {
  ScanSettings scan;
  std::optional<double> s0;      // override the automatic bottom-edge height
  double corner_epsilon = 1e-3;  // twist shift used when 0 is an eigenvalue; 0 disables
  int stabilization_halvings = 12;  // bottom-edge height search depth at twist 0 / 2 pi
};

// Scans all four edges and evaluates the index identities:
//   - the four indices sum to zero;
//   - top index = top count (its crossing forms share one sign);
//   - bottom index = -(bottom count);
//   - right edge empty once lambda_max exceeds the potential bound;
//   - for interior twists, top index = -(left index);
//   - Morse index = -(left index), plus the matrix Morse index of V(0) when
//     the twist is 0 or 2 pi.
// The bottom-edge height s0 defaults to the problem's s_min for interior
// twists; at twist 0 or 2 pi it is found by halving from L/8 until the
// bottom-edge count stabilizes at the matrix Morse index of V(0).  If zero is
// an eigenvalue (a crossing at the rectangle's left-top corner), the twist is
// shifted by corner_epsilon once and the report annotates the shift.
MaslovReport full_report(const HillProblem& problem, const ReportOptions& options = {},
                         ScanCache* cache = nullptr);

// Bottom-edge height for twists 0 and 2 pi, found by halving from L/8 until
// the bottom-edge crossing count equals the matrix Morse index of V(0) at two
// consecutive heights.  Appends a diagnostic to flags and returns the last
// height tried when the search cannot conclude.  Interior twists should use
// the problem's s_min instead.
double stabilized_bottom_height(const HillProblem& problem, const ReportOptions& options,
                                std::vector<std::string>& flags, ScanCache* cache = nullptr);

// One twist angle of a sweep: eigenvalue and conjugate-point locations, the
// per-point crossing-form values (gram trace / kernel dimension), counts, and
// the identity outcome.  Interior twists scan only the top and left edges and
// take the bottom/right edges as empty, which holds for the default heights;
// twists 0 and 2 pi run the full report pathway.
struct SweepRow {
  double theta = 0.0;
  double s0 = 0.0;
  bool full_pathway = false;
  std::vector<double> eigenvalues;
  std::vector<double> conjugate_points;
  std::vector<double> conjugate_form_values;
  double top_count = 0.0;
  double left_count = 0.0;
  double index_sum = 0.0;
  bool identities_pass = false;
  std::vector<std::string> flags;
};

// Sweeps the twist over the given angles (all in [0, 2 pi]).  Propagator
// grids do not depend on the twist, so one cache serves every row; the left
// edge is scanned from one shared height (the smallest default over the
// interior angles) to keep the cache keys identical across rows.
std::vector<SweepRow> sweep_theta(const HillProblem& problem,
                                  const std::vector<double>& thetas,
                                  const ReportOptions& options = {},
                                  ScanCache* cache = nullptr);

}  // namespace hillmaslov
