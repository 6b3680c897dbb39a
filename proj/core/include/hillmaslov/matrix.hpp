#pragma once

#include <initializer_list>
#include <vector>

namespace hillmaslov {

// Dense real matrix, row-major. Everything in this project is small
// (at most 16n x 16n with n <= 4), so the representation favours clarity
// over blocking tricks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled

  static Matrix identity(int n);
  static Matrix diagonal(const std::vector<double>& d);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(const std::vector<double>& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  Matrix transpose() const;
  Matrix block(int r0, int c0, int r, int c) const;
  void set_block(int r0, int c0, const Matrix& m);
  Matrix col(int j) const;
  std::vector<double> col_vector(int j) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);
  Matrix operator-() const;

  double max_abs() const;
  double frob_norm() const;
  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);

// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
Matrix kron(const Matrix& a, const Matrix& b);

// Horizontal concatenation [a | b]; row counts must agree.
Matrix hcat(const Matrix& a, const Matrix& b);

// Determinant via partially pivoted LU. Throws std::invalid_argument for
// non-square input.
double determinant(Matrix a);

// Solves a x = b with partially pivoted LU; a square, b may have several
// columns. Throws NumericalError if a pivot degenerates to zero.
Matrix solve(Matrix a, Matrix b);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm2(const std::vector<double>& x);

}  // namespace hillmaslov
