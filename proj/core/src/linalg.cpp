#include "hillmaslov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hillmaslov/errors.hpp"

namespace hillmaslov {

namespace {

// One-sided Jacobi for rows >= cols; pairwise column orthogonality is only
// achievable in that regime.
SvdResult jacobi_svd_tall(const Matrix& a) {
  int rows = a.rows(), cols = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(cols);
  const double conv_tol = 1e-15;
  const int max_sweeps = 100 + 10 * cols;
  // columns this far below the matrix scale carry no singular-value
  // information; rotating pairs of them just chases rounding noise
  const double norm_f = w.frob_norm();
  const double dead_col = (1e-15 * norm_f) * (1e-15 * norm_f);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < cols - 1; ++i) {
      for (int j = i + 1; j < cols; ++j) {
        double aa = 0.0, bb = 0.0, gg = 0.0;
        for (int r = 0; r < rows; ++r) {
          aa += w(r, i) * w(r, i);
          bb += w(r, j) * w(r, j);
          gg += w(r, i) * w(r, j);
        }
        if (aa <= dead_col && bb <= dead_col) continue;
        if (std::abs(gg) <= conv_tol * std::sqrt(aa * bb)) continue;
        rotated = true;
        double zeta = (bb - aa) / (2.0 * gg);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (int r = 0; r < rows; ++r) {
          double wi = w(r, i), wj = w(r, j);
          w(r, i) = cs * wi - sn * wj;
          w(r, j) = sn * wi + cs * wj;
        }
        for (int r = 0; r < cols; ++r) {
          double vi = v(r, i), vj = v(r, j);
          v(r, i) = cs * vi - sn * vj;
          v(r, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == max_sweeps) throw ConvergenceError("jacobi_svd: sweep limit exceeded");

  std::vector<double> sigma(cols);
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += w(r, j) * w(r, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigma[x] > sigma[y]; });

  SvdResult out;
  out.singular_values.resize(cols);
  out.v = Matrix(cols, cols);
  for (int j = 0; j < cols; ++j) {
    out.singular_values[j] = sigma[order[j]];
    for (int r = 0; r < cols; ++r) out.v(r, j) = v(r, order[j]);
  }
  return out;
}

}  // namespace

SvdResult jacobi_svd(const Matrix& a) {
  if (a.rows() >= a.cols()) return jacobi_svd_tall(a);

  // Wide input: factor the transpose, then map right vectors back through
  // v_k = a^T u_k / sigma_k and complete the null space by Gram-Schmidt.
  int rows = a.rows(), cols = a.cols();
  SvdResult t = jacobi_svd_tall(a.transpose());
  double dead = 1e-15 * (t.singular_values.empty() ? 0.0 : t.singular_values[0]);

  SvdResult out;
  out.singular_values.assign(cols, 0.0);
  out.v = Matrix(cols, cols);
  Matrix at = a.transpose();
  int live = 0;
  for (int k = 0; k < rows; ++k) {
    if (t.singular_values[k] <= dead) break;
    auto vk = matvec(at, t.v.col_vector(k));
    double inv = 1.0 / t.singular_values[k];
    for (int r = 0; r < cols; ++r) out.v(r, live) = vk[r] * inv;
    out.singular_values[live] = t.singular_values[k];
    ++live;
  }
  // extend to an orthonormal basis; extension columns carry sigma = 0
  int filled = live;
  for (int cand = 0; cand < cols && filled < cols; ++cand) {
    std::vector<double> u(cols, 0.0);
    u[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < filled; ++j) {
        double proj = 0.0;
        for (int r = 0; r < cols; ++r) proj += u[r] * out.v(r, j);
        for (int r = 0; r < cols; ++r) u[r] -= proj * out.v(r, j);
      }
    }
    double nrm = norm2(u);
    if (nrm < 0.5) continue;
    for (int r = 0; r < cols; ++r) out.v(r, filled) = u[r] / nrm;
    ++filled;
  }
  if (filled != cols) throw NumericalError("jacobi_svd: basis completion failed");
  return out;
}

Matrix kernel_basis(const Matrix& a, double tol) {
  SvdResult svd = jacobi_svd(a);
  int cols = a.cols();
  double sigma_max = cols > 0 ? svd.singular_values[0] : 0.0;
  double threshold = tol * std::max(1.0, sigma_max);
  int k = 0;
  for (int j = 0; j < cols; ++j)
    if (svd.singular_values[j] <= threshold) ++k;
  Matrix basis(cols, k);
  int out = 0;
  for (int j = 0; j < cols; ++j) {
    if (svd.singular_values[j] > threshold) continue;
    for (int r = 0; r < cols; ++r) basis(r, out) = svd.v(r, j);
    ++out;
  }
  return basis;
}

namespace {

void require_symmetric(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": non-square input");
  double scale = std::max(1.0, a.max_abs());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw std::invalid_argument(std::string(who) + ": input not symmetric");
}

double off_diag_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenResult eig_symmetric(const Matrix& a_in) {
  require_symmetric(a_in, "eig_symmetric");
  int n = a_in.rows();
  Matrix a = 0.5 * (a_in + a_in.transpose());
  Matrix q = Matrix::identity(n);
  double scale = std::max(a.frob_norm(), 1e-300);
  const int max_sweeps = 100 * std::max(n, 1);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diag_norm(a) <= 1e-13 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        double apr = a(p, r);
        if (std::abs(apr) <= 1e-18 * scale) continue;
        double tau = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        for (int k = 0; k < n; ++k) {
          double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_diag_norm(a) > 1e-13 * scale)
    throw ConvergenceError("eig_symmetric: sweep limit exceeded");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) > a(y, y); });

  EigenResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  out.has_vectors = true;
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int r = 0; r < n; ++r) out.vectors(r, j) = q(r, order[j]);
  }
  return out;
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(Matrix& h) {
  int n = h.rows();
  for (int k = 0; k < n - 2; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += h(i, k) * h(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    double alpha = h(k + 1, k) >= 0.0 ? -norm : norm;
    std::vector<double> u(n, 0.0);
    u[k + 1] = h(k + 1, k) - alpha;
    for (int i = k + 2; i < n; ++i) u[i] = h(i, k);
    double unorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) unorm2 += u[i] * u[i];
    if (unorm2 == 0.0) continue;
    double beta = 2.0 / unorm2;
    // H := (I - beta u u^T) H
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += u[i] * h(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) h(i, j) -= s * u[i];
    }
    // H := H (I - beta u u^T)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += h(i, j) * u[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) h(i, j) -= s * u[j];
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

void apply_householder3(Matrix& h, int n, int k, int end_row, double x, double y, double z) {
  // Reflects rows/columns so that (x, y, z)^T maps to a multiple of e1;
  // z participates only while the bulge has three rows.
  bool three = k + 2 <= end_row;
  double norm = std::sqrt(x * x + y * y + (three ? z * z : 0.0));
  if (norm == 0.0) return;
  double alpha = x >= 0.0 ? -norm : norm;
  double u0 = x - alpha, u1 = y, u2 = three ? z : 0.0;
  double unorm2 = u0 * u0 + u1 * u1 + u2 * u2;
  if (unorm2 == 0.0) return;
  double beta = 2.0 / unorm2;
  int rows = three ? 3 : 2;
  double u[3] = {u0, u1, u2};
  int base = k;
  int jlo = std::max(0, k - 1);
  for (int j = jlo; j < n; ++j) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += u[r] * h(base + r, j);
    s *= beta;
    for (int r = 0; r < rows; ++r) h(base + r, j) -= s * u[r];
  }
  int ihi = std::min(n - 1, k + 3);
  for (int i = 0; i <= ihi; ++i) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += h(i, base + r) * u[r];
    s *= beta;
    for (int r = 0; r < rows; ++r) h(i, base + r) -= s * u[r];
  }
}

void eig2x2(double a, double b, double c, double d,
            std::complex<double>* l1, std::complex<double>* l2) {
  double tr = 0.5 * (a + d);
  double disc = 0.25 * (a - d) * (a - d) + b * c;
  if (disc >= 0.0) {
    double root = std::sqrt(disc);
    double l = tr >= 0.0 ? tr + root : tr - root;  // larger magnitude first
    *l1 = l;
    double det = a * d - b * c;
    *l2 = (l != 0.0) ? det / l : tr - root;
  } else {
    double im = std::sqrt(-disc);
    *l1 = {tr, im};
    *l2 = {tr, -im};
  }
}

}  // namespace

EigenResult eig_general(const Matrix& a_in) {
  if (a_in.rows() != a_in.cols())
    throw std::invalid_argument("eig_general: non-square input");
  int n = a_in.rows();
  EigenResult out;
  out.values.resize(n);
  out.has_vectors = false;
  if (n == 0) return out;

  Matrix h = a_in;
  hessenberg(h);
  double scale = std::max(h.frob_norm(), 1e-300);
  const double eps = 1e-15;
  const int max_iters = 100 * n;

  int hi = n - 1;
  int iters = 0;
  int stagnation = 0;
  while (hi >= 0) {
    // deflate negligible subdiagonals
    for (int i = 1; i <= hi; ++i) {
      double small = eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (small == 0.0) small = eps * scale;
      if (std::abs(h(i, i - 1)) <= small) h(i, i - 1) = 0.0;
    }
    if (hi == 0) {
      out.values[hi] = h(0, 0);
      hi = -1;
      continue;
    }
    if (h(hi, hi - 1) == 0.0) {
      out.values[hi] = h(hi, hi);
      --hi;
      stagnation = 0;
      continue;
    }
    if (hi == 1 || h(hi - 1, hi - 2) == 0.0) {
      std::complex<double> l1, l2;
      eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), &l1, &l2);
      out.values[hi - 1] = l1;
      out.values[hi] = l2;
      hi -= 2;
      stagnation = 0;
      continue;
    }

    if (++iters > max_iters)
      throw ConvergenceError("eig_general: iteration limit exceeded");

    // find the active window start
    int lo = hi - 1;
    while (lo > 0 && h(lo, lo - 1) != 0.0) --lo;

    // Francis double shift from the trailing 2x2 (exceptional shift on stagnation)
    double s, p;
    if (++stagnation % 11 == 0) {
      double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
      s = 2.0 * (h(hi, hi) + 0.75 * w);
      p = (h(hi, hi) + 0.75 * w) * (h(hi, hi) + 0.75 * w) + 0.4375 * w * w;
    } else {
      s = h(hi - 1, hi - 1) + h(hi, hi);
      p = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    }
    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + p;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
    double z = h(lo + 2, lo + 1) * h(lo + 1, lo);

    for (int k = lo; k <= hi - 1; ++k) {
      apply_householder3(h, n, k, hi, x, y, z);
      if (k < hi - 1) {
        x = h(k + 1, k);
        y = h(k + 2, k);
        z = (k + 3 <= hi) ? h(k + 3, k) : 0.0;
      }
    }
    // restore Hessenberg zeros below the first subdiagonal in the window
    for (int i = lo + 2; i <= hi; ++i)
      for (int j = lo; j <= i - 2; ++j) h(i, j) = 0.0;
  }

  std::stable_sort(out.values.begin(), out.values.end(),
                   [](const std::complex<double>& x, const std::complex<double>& y) {
                     if (x.real() != y.real()) return x.real() < y.real();
                     return x.imag() < y.imag();
                   });
  return out;
}

Signature signature(const Matrix& gram, double tol) {
  EigenResult eig = eig_symmetric(gram);
  Signature sig;
  for (const auto& v : eig.values) {
    double x = v.real();
    if (x > tol)
      ++sig.n_plus;
    else if (x < -tol)
      ++sig.n_minus;
    else
      ++sig.n_zero;
  }
  return sig;
}

}  // namespace hillmaslov
