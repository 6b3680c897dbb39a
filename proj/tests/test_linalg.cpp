#include <doctest.h>

#include <algorithm>
#include <random>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"
#include "hillmaslov/matrix.hpp"
#include "oracles.hpp"

using hillmaslov::Matrix;

namespace {

double orthonormality_defect(const Matrix& v) {
  if (v.cols() == 0) return 0.0;
  Matrix g = v.transpose() * v;
  return (g - Matrix::identity(v.cols())).max_abs();
}

}  // namespace

TEST_CASE("jacobi_svd recovers known singular values") {
  Matrix a = Matrix::diagonal({3.0, 2.0, 1.0});
  auto svd = hillmaslov::jacobi_svd(a);
  CHECK(svd.singular_values[0] == doctest::Approx(3.0));
  CHECK(svd.singular_values[1] == doctest::Approx(2.0));
  CHECK(svd.singular_values[2] == doctest::Approx(1.0));
  CHECK(orthonormality_defect(svd.v) < 1e-12);
}

TEST_CASE("jacobi_svd rectangular and rank-deficient") {
  std::mt19937 rng(23);
  // wide matrix: at least cols - rows exact zeros among the singular values
  Matrix a = oracles::random_matrix(rng, 3, 6);
  auto svd = hillmaslov::jacobi_svd(a);
  CHECK(svd.singular_values.size() == 6);
  CHECK(svd.singular_values[3] < 1e-12 * svd.singular_values[0]);
  CHECK(orthonormality_defect(svd.v) < 1e-12);

  // product residual: || a v_k || = sigma_k for every k
  for (int k = 0; k < 6; ++k) {
    auto vk = svd.v.col_vector(k);
    CHECK(hillmaslov::norm2(hillmaslov::matvec(a, vk)) ==
          doctest::Approx(svd.singular_values[k]).epsilon(1e-10));
  }
}

TEST_CASE("kernel_basis invariants") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    int rank = 1 + static_cast<int>(rng() % 4);
    int n = 6;
    // build an n x n matrix of known rank
    Matrix b = oracles::random_matrix(rng, n, rank);
    Matrix c = oracles::random_matrix(rng, rank, n);
    Matrix a = b * c;
    Matrix k = hillmaslov::kernel_basis(a, 1e-8);
    CHECK(k.cols() == n - rank);
    CHECK(orthonormality_defect(k) < 1e-12);
    double anorm = a.max_abs();
    for (int j = 0; j < k.cols(); ++j) {
      auto v = k.col_vector(j);
      CHECK(hillmaslov::norm2(hillmaslov::matvec(a, v)) <= 10.0 * 1e-8 * anorm);
    }
  }

  // full column rank: empty kernel
  Matrix full = oracles::random_matrix(rng, 6, 4);
  CHECK(hillmaslov::kernel_basis(full, 1e-8).cols() == 0);

  // zero matrix: whole space
  CHECK(hillmaslov::kernel_basis(Matrix(3, 3), 1e-8).cols() == 3);

  // rotation by a full turn minus the identity is zero up to rounding
  // (entries ~1e-16, not exact zeros); still the whole space
  double tau = 8.0 * std::atan(1.0);
  Matrix full_turn = Matrix::from_rows({{std::cos(tau), -std::sin(tau)},
                                        {std::sin(tau), std::cos(tau)}});
  CHECK(hillmaslov::kernel_basis(full_turn - Matrix::identity(2), 1e-8).cols() == 2);
}

TEST_CASE("eig_symmetric on diagonal and known matrices") {
  auto eig = hillmaslov::eig_symmetric(Matrix::diagonal({5.0, -1.0, 2.0}));
  REQUIRE(eig.values.size() == 3);
  CHECK(eig.values[0].real() == doctest::Approx(5.0));
  CHECK(eig.values[1].real() == doctest::Approx(2.0));
  CHECK(eig.values[2].real() == doctest::Approx(-1.0));
  CHECK(eig.has_vectors);

  // 2x2 with known spectrum {3, 1}
  Matrix a = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
  eig = hillmaslov::eig_symmetric(a);
  CHECK(eig.values[0].real() == doctest::Approx(3.0));
  CHECK(eig.values[1].real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(hillmaslov::eig_symmetric(Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}})),
                  std::invalid_argument);
}

TEST_CASE("eig_symmetric against characteristic polynomial bisection") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    Matrix a = oracles::random_symmetric(rng, n, 2.0);
    auto expected = oracles::symmetric_eigenvalues_bisect(a);
    REQUIRE(static_cast<int>(expected.size()) == n);
    auto eig = hillmaslov::eig_symmetric(a);
    std::vector<double> got;
    for (auto v : eig.values) got.push_back(v.real());
    std::sort(got.begin(), got.end());
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  }
}

TEST_CASE("eig_symmetric eigenpair residuals and orthonormality") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    Matrix a = oracles::random_symmetric(rng, n, 3.0);
    auto eig = hillmaslov::eig_symmetric(a);
    CHECK(orthonormality_defect(eig.vectors) < 1e-11);
    for (int j = 0; j < n; ++j) {
      auto v = eig.vectors.col_vector(j);
      auto av = hillmaslov::matvec(a, v);
      double lambda = eig.values[j].real();
      double resid = 0.0;
      for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(av[i] - lambda * v[i]));
      CHECK(resid < 1e-10 * std::max(1.0, a.max_abs()));
    }
  }
}

TEST_CASE("eig_general basic spectra") {
  // rotation generator: eigenvalues +/- i
  Matrix j = Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
  auto eig = hillmaslov::eig_general(j);
  REQUIRE(eig.values.size() == 2);
  CHECK(eig.values[0].real() == doctest::Approx(0.0));
  CHECK(std::abs(eig.values[0].imag()) == doctest::Approx(1.0));
  // exact conjugate pair
  CHECK(eig.values[0].real() == eig.values[1].real());
  CHECK(eig.values[0].imag() == -eig.values[1].imag());

  // Jordan block: double eigenvalue 1
  Matrix jordan = Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
  eig = hillmaslov::eig_general(jordan);
  CHECK(eig.values[0].real() == doctest::Approx(1.0));
  CHECK(eig.values[1].real() == doctest::Approx(1.0));
  CHECK(eig.values[0].imag() == doctest::Approx(0.0));

  // triangular: spectrum on the diagonal
  Matrix tri = Matrix::from_rows({{1.0, 5.0, -2.0}, {0.0, -3.0, 1.0}, {0.0, 0.0, 2.0}});
  eig = hillmaslov::eig_general(tri);
  std::vector<double> got;
  for (auto v : eig.values) got.push_back(v.real());
  std::sort(got.begin(), got.end());
  CHECK(got[0] == doctest::Approx(-3.0));
  CHECK(got[1] == doctest::Approx(1.0));
  CHECK(got[2] == doctest::Approx(2.0));
}

TEST_CASE("eig_general recovers a planted spectrum under similarity") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 6);
    std::vector<double> planted(n);
    for (int i = 0; i < n; ++i) planted[i] = -3.0 + i * 1.37 + 0.01 * static_cast<int>(rng() % 7);
    Matrix d = Matrix::diagonal(planted);
    Matrix t = oracles::random_matrix(rng, n, n) + 4.0 * Matrix::identity(n);
    Matrix a = t * d * hillmaslov::solve(t, Matrix::identity(n));
    auto eig = hillmaslov::eig_general(a);
    std::vector<double> got;
    for (auto v : eig.values) {
      CHECK(std::abs(v.imag()) < 1e-7);
      got.push_back(v.real());
    }
    std::sort(got.begin(), got.end());
    std::sort(planted.begin(), planted.end());
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(planted[i]).epsilon(1e-7));
  }
}

TEST_CASE("eig_general complex pairs from random symplectic-like matrices") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + 2 * static_cast<int>(rng() % 3);
    Matrix a = oracles::random_matrix(rng, n, n, 2.0);
    auto eig = hillmaslov::eig_general(a);
    // conjugate-pair symmetry: sum of imaginary parts vanishes exactly
    double imag_sum = 0.0;
    for (auto v : eig.values) imag_sum += v.imag();
    CHECK(imag_sum == 0.0);
    // spectrum reproduces the trace and determinant
    std::complex<double> prod(1.0, 0.0), sum(0.0, 0.0);
    for (auto v : eig.values) {
      prod *= v;
      sum += v;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += a(i, i);
    CHECK(sum.real() == doctest::Approx(tr).epsilon(1e-8));
    CHECK(prod.real() == doctest::Approx(hillmaslov::determinant(a)).epsilon(1e-6));
  }
}

TEST_CASE("signature counts and Sylvester invariance") {
  Matrix g = Matrix::diagonal({2.0, -1.0, 0.0, 5.0});
  auto sig = hillmaslov::signature(g, 1e-10);
  CHECK(sig.n_plus == 2);
  CHECK(sig.n_minus == 1);
  CHECK(sig.n_zero == 1);

  std::mt19937 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + static_cast<int>(rng() % 4);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + i);
    Matrix g0 = Matrix::diagonal(d);
    auto sig0 = hillmaslov::signature(g0, 1e-10);
    Matrix c = oracles::random_matrix(rng, n, n) + 3.0 * Matrix::identity(n);
    Matrix g1 = c.transpose() * g0 * c;
    auto sig1 = hillmaslov::signature(g1, 1e-10);
    CHECK(sig0.n_plus == sig1.n_plus);
    CHECK(sig0.n_minus == sig1.n_minus);
    CHECK(sig0.n_zero == sig1.n_zero);
  }
}
