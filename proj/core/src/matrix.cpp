#include "hillmaslov/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hillmaslov/errors.hpp"

namespace hillmaslov {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::column(const std::vector<double>& v) {
  Matrix m(static_cast<int>(v.size()), 1);
  for (int i = 0; i < m.rows(); ++i) m(i, 0) = v[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(int r0, int c0, int r, int c) const {
  if (r0 < 0 || c0 < 0 || r0 + r > rows_ || c0 + c > cols_)
    throw std::invalid_argument("Matrix::block: out of range");
  Matrix b(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(int r0, int c0, const Matrix& m) {
  if (r0 < 0 || c0 < 0 || r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
    throw std::invalid_argument("Matrix::set_block: out of range");
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

Matrix Matrix::col(int j) const { return block(0, j, rows_, 1); }

std::vector<double> Matrix::col_vector(int j) const {
  std::vector<double> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("Matrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("Matrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = -m(i, j);
  return m;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frob_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix *: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

namespace {

// In-place LU with partial pivoting; returns the permutation sign, or 0 if
// a pivot column is exactly zero below the diagonal.
int lu_decompose(Matrix& a, std::vector<int>& perm) {
  int n = a.rows();
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return sign;
}

}  // namespace

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: non-square input");
  if (a.rows() == 0) return 1.0;
  std::vector<int> perm;
  int sign = lu_decompose(a, perm);
  if (sign == 0) return 0.0;
  double d = sign;
  for (int i = 0; i < a.rows(); ++i) d *= a(i, i);
  return d;
}

Matrix solve(Matrix a, Matrix b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve: non-square matrix");
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  int n = a.rows();
  std::vector<int> perm;
  if (lu_decompose(a, perm) == 0) throw NumericalError("solve: singular matrix");
  Matrix x(n, b.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < b.cols(); ++j) x(i, j) = b(perm[i], j);
  // forward substitution (unit lower triangle)
  for (int i = 1; i < n; ++i)
    for (int k = 0; k < i; ++k) {
      double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) x(i, j) -= lik * x(k, j);
    }
  // back substitution
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) {
      double uik = a(i, k);
      if (uik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) x(i, j) -= uik * x(k, j);
    }
    for (int j = 0; j < b.cols(); ++j) x(i, j) /= a(i, i);
  }
  return x;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw std::invalid_argument("matvec: shape mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

}  // namespace hillmaslov
