#pragma once

#include "hillmaslov/hill.hpp"
#include "hillmaslov/matrix.hpp"

namespace hillmaslov {

// Orthogonal skew-symmetric form on the doubled boundary-trace space
// (p(-s), w(-s), p(s), w(s)) in R^{16n}: block diagonal
// (J x I_2n) + (J^T x I_2n) + (J^T x I_2n) + (J x I_2n) with J the 2x2
// rotation generator.
Matrix omega_matrix(int n);

// A plane given by a spanning frame.  `columns` is the defining 16n x 8n
// block matrix; `orthonormal` spans the same plane with orthonormal columns
// (used for scale-free intersection computations).
struct LagrangianFrame {
  Matrix columns;
  Matrix orthonormal;
  int n = 0;
};

// Validates full column rank and isotropy of the span with respect to
// omega_matrix; throws NumericalError on violation.
LagrangianFrame make_frame(Matrix columns);

// Frame of the plane {(v, v, u, u) : v, u in R^{4n}} encoding equality of
// solution and rotation-flow traces at both interval endpoints.
LagrangianFrame reference_plane(int n);

// Boundary-trace frame at (lambda, s): solution-family fundamental matrices
// (realified, based at x = -L) paired with the rotation flow, evaluated at
// x = -s and x = s.
LagrangianFrame trace_frame(const HillProblem& problem, double lambda, double s);

struct IntersectionResult {
  int dim = 0;
  // true when a singular value of the concatenated frame lies within a
  // factor 10 of the rank cut, i.e. the dimension count is fragile
  bool ambiguous = false;
};

// Dimension of the intersection of the two spans, via the nullity of the
// concatenated (orthonormalized) frames.
IntersectionResult intersection(const LagrangianFrame& a, const LagrangianFrame& b,
                                double tol = 1e-6);
int intersection_dim(const LagrangianFrame& a, const LagrangianFrame& b);

}  // namespace hillmaslov
