#include "hillmaslov/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"

namespace hillmaslov {

namespace {

Matrix rotation_generator_block(int n, bool transposed) {
  // J x I_2n, i.e. [[0, I],[-I, 0]] on two 2n-blocks (or its transpose)
  Matrix j(4 * n, 4 * n);
  double sgn = transposed ? -1.0 : 1.0;
  j.set_block(0, 2 * n, sgn * Matrix::identity(2 * n));
  j.set_block(2 * n, 0, -sgn * Matrix::identity(2 * n));
  return j;
}

}  // namespace

Matrix omega_matrix(int n) {
  if (n < 1) throw std::invalid_argument("omega_matrix: dimension must be positive");
  Matrix omega(16 * n, 16 * n);
  Matrix jn = rotation_generator_block(n, false);
  Matrix jt = rotation_generator_block(n, true);
  omega.set_block(0, 0, jn);
  omega.set_block(4 * n, 4 * n, jt);
  omega.set_block(8 * n, 8 * n, jt);
  omega.set_block(12 * n, 12 * n, jn);
  return omega;
}

LagrangianFrame make_frame(Matrix columns) {
  if (columns.rows() % 16 != 0 || columns.rows() / 16 < 1)
    throw std::invalid_argument("make_frame: rows must be a positive multiple of 16");
  int n = columns.rows() / 16;
  if (columns.cols() != 8 * n)
    throw std::invalid_argument("make_frame: expected 8n columns");

  SvdResult svd = jacobi_svd(columns);
  double smax = svd.singular_values.front();
  double smin = svd.singular_values.back();
  if (!(smin > 1e-10 * smax))
    throw NumericalError("make_frame: frame is column rank deficient");

  // orthonormal basis of the span: (columns * v_k) / sigma_k
  Matrix q = columns * svd.v;
  for (int k = 0; k < q.cols(); ++k) {
    double inv = 1.0 / svd.singular_values[static_cast<std::size_t>(k)];
    for (int i = 0; i < q.rows(); ++i) q(i, k) *= inv;
  }

  // isotropy of the span; the raw residual scales like ||F||^2
  Matrix omega = omega_matrix(n);
  double scale = columns.frob_norm();
  double resid = (columns.transpose() * omega * columns).max_abs();
  if (resid > 1e-8 * std::max(1.0, scale * scale))
    throw NumericalError("make_frame: frame is not isotropic");

  LagrangianFrame f;
  f.columns = std::move(columns);
  f.orthonormal = std::move(q);
  f.n = n;
  return f;
}

LagrangianFrame reference_plane(int n) {
  if (n < 1) throw std::invalid_argument("reference_plane: dimension must be positive");
  Matrix f(16 * n, 8 * n);
  Matrix id = Matrix::identity(4 * n);
  f.set_block(0, 0, id);
  f.set_block(4 * n, 0, id);
  f.set_block(8 * n, 4 * n, id);
  f.set_block(12 * n, 4 * n, id);
  return make_frame(std::move(f));
}

LagrangianFrame trace_frame(const HillProblem& problem, double lambda, double s) {
  double l = problem.half_period();
  if (!(s > 0.0) || s > l + 1e-9)
    throw std::invalid_argument("trace_frame: s outside (0, L]");
  int n = problem.dim();

  Matrix a_minus = realify(problem.fundamental_matrix(lambda, -l, -s));
  Matrix a_plus = realify(problem.fundamental_matrix(lambda, -l, s));
  Matrix b_minus = problem.rotation_flow_matrix(s, -s);
  Matrix b_plus = problem.rotation_flow_matrix(s, s);

  Matrix f(16 * n, 8 * n);
  f.set_block(0, 0, a_minus);
  f.set_block(4 * n, 4 * n, b_minus);
  f.set_block(8 * n, 0, a_plus);
  f.set_block(12 * n, 4 * n, b_plus);
  return make_frame(std::move(f));
}

IntersectionResult intersection(const LagrangianFrame& a, const LagrangianFrame& b,
                                double tol) {
  if (a.orthonormal.rows() != b.orthonormal.rows())
    throw std::invalid_argument("intersection: frames live in different spaces");
  Matrix cat = hcat(a.orthonormal, b.orthonormal);
  SvdResult svd = jacobi_svd(cat);
  double smax = svd.singular_values.front();
  double cut = tol * std::max(smax, 1.0);

  IntersectionResult out;
  for (double sv : svd.singular_values) {
    if (sv <= cut) ++out.dim;
    if (sv > cut / 10.0 && sv < cut * 10.0) out.ambiguous = true;
  }
  return out;
}

int intersection_dim(const LagrangianFrame& a, const LagrangianFrame& b) {
  return intersection(a, b).dim;
}

}  // namespace hillmaslov
