#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "form_oracle.hpp"
#include "hillmaslov/crossings.hpp"
#include "hillmaslov/hill.hpp"
#include "hillmaslov/matrix.hpp"
#include "hillmaslov/potential.hpp"

using hillmaslov::Axis;
using hillmaslov::CrossingRecord;
using hillmaslov::FormKind;
using hillmaslov::HillProblem;
using hillmaslov::Matrix;
using hillmaslov::PotentialSpec;
using hillmaslov::ScanCache;
using hillmaslov::ScanSettings;

namespace {

constexpr double kPi = 3.14159265358979323846;

PotentialSpec mathieu_potential() { return PotentialSpec::mathieu(3.2, 2.0, kPi); }
PotentialSpec free_potential() { return PotentialSpec::constant(Matrix(1, 1), kPi); }

// Reference locations for the 3.2 cos(2x) problem, frozen from an independent
// high-order adaptive integration.
constexpr double kLambdaA = 0.8623455065526502;  // twist 0.1, s = pi
constexpr double kLambdaB = 1.0458341625116563;
constexpr double kConjA = 0.027958134087768316;  // twist 0.1, lambda = 0
constexpr double kConjB = 2.9262884646108347;
constexpr double kLambdaDouble = 0.9601600985815664;  // twist pi: M = -I
constexpr double kConjPiA = 0.9968025200415493;       // twist pi, lambda = 0
constexpr double kConjPiB = 2.917584428698543;
constexpr double kLambdaHalfA = 0.8924116994512434;  // twist pi/2, s = pi
constexpr double kLambdaHalfB = 1.0218640803507593;

ScanSettings grid_of(int cells) {
  ScanSettings st;
  st.grid = cells;
  return st;
}

double orthonormality_defect(const Matrix& k) {
  return (k.transpose() * k - Matrix::identity(k.cols())).max_abs();
}

}  // namespace

TEST_CASE("crossing indicator vanishes at eigenvalues and stays positive elsewhere") {
  // free potential: eigenvalues sit at -((theta + 2 pi k) / (2s))^2
  HillProblem fp(free_potential(), kPi / 2.0);
  CHECK(hillmaslov::crossing_indicator(fp, -1.0 / 16.0, kPi) < 1e-7);
  CHECK(hillmaslov::crossing_indicator(fp, -0.3, kPi) > 1e-2);

  // y'' = 0 solutions are affine: a twist by pi is never attained
  HillProblem fpi(free_potential(), kPi);
  for (double s : {0.5, 1.5, 3.0})
    CHECK(hillmaslov::crossing_indicator(fpi, 0.0, s) > 0.5);

  HillProblem mp(mathieu_potential(), 0.1);
  CHECK(hillmaslov::crossing_indicator(mp, kLambdaA, kPi) < 1e-6);
  CHECK(hillmaslov::crossing_indicator(mp, 0.5, kPi) > 1e-3);
}

TEST_CASE("kernel dimension and basis at crossings") {
  HillProblem mp(mathieu_potential(), 0.1);
  auto simple = hillmaslov::multiplicity_at(mp, kLambdaA, kPi);
  CHECK(simple.normalized_multiplicity == 1);
  CHECK(simple.kernel.rows() == 4);
  CHECK(simple.kernel.cols() == 2);
  CHECK(orthonormality_defect(simple.kernel) < 1e-9);

  // no kernel away from the spectrum
  CHECK(hillmaslov::multiplicity_at(mp, 0.5, kPi).normalized_multiplicity == 0);

  // tangential touch: the propagator degenerates to -I and the whole
  // difference matrix drops to rounding scale; the kernel is still full
  HillProblem mpi(mathieu_potential(), kPi);
  auto touch = hillmaslov::multiplicity_at(mpi, kLambdaDouble, kPi);
  CHECK(touch.normalized_multiplicity == 2);
  CHECK(touch.kernel.cols() == 4);
  CHECK(orthonormality_defect(touch.kernel) < 1e-9);

  HillProblem cp(PotentialSpec::constant(Matrix::diagonal({2.0}), kPi), 1.0);
  double lam = 2.0 - std::pow(1.0 / (2.0 * kPi), 2);
  CHECK(hillmaslov::multiplicity_at(cp, lam, kPi).normalized_multiplicity == 1);
}

TEST_CASE("lambda scans: simple, tangential, coincident, endpoint crossings") {
  HillProblem mp(mathieu_potential(), 0.1);
  auto recs = hillmaslov::find_crossings_lambda(mp, kPi, 0.0, 4.0, grid_of(800));
  REQUIRE(recs.size() == 2);
  CHECK(std::abs(recs[0].lambda - kLambdaA) < 1e-6);
  CHECK(std::abs(recs[1].lambda - kLambdaB) < 1e-6);
  for (const auto& r : recs) {
    CHECK(r.axis == Axis::lambda);
    CHECK(r.s == kPi);
    CHECK(r.normalized_multiplicity == 1);
    CHECK(r.form_kind == FormKind::lambda_form);
    CHECK(r.gram.rows() == 2);
    CHECK(r.signature.n_minus == 2);
    CHECK(r.signature.n_plus == 0);
    CHECK(r.signature.n_zero == 0);
    CHECK_FALSE(r.at_endpoint);
    CHECK_FALSE(r.continuity_flagged);
    CHECK(r.location() == r.lambda);
  }

  // tangential double crossing: the indicator touches zero with no sign
  // change in the scalar trace gap
  HillProblem mpi(mathieu_potential(), kPi);
  auto touch = hillmaslov::find_crossings_lambda(mpi, kPi, 0.0, 4.0, grid_of(800));
  REQUIRE(touch.size() == 1);
  CHECK(std::abs(touch[0].lambda - kLambdaDouble) < 1e-6);
  CHECK(touch[0].normalized_multiplicity == 2);
  CHECK(touch[0].gram.rows() == 4);
  CHECK(touch[0].signature.n_minus == 4);

  // free problem: every eigenvalue is negative
  HillProblem fp(free_potential(), kPi / 2.0);
  CHECK(hillmaslov::find_crossings_lambda(fp, kPi, 0.0, 4.0, grid_of(400)).empty());

  // two constant branches crossing the window, with an exact coincidence at
  // 0.9375 where both branches meet
  HillProblem dp(PotentialSpec::constant(Matrix::diagonal({4.0, 1.0}), kPi),
                 kPi / 2.0);
  auto d = hillmaslov::find_crossings_lambda(dp, kPi, 0.0, 4.0, grid_of(400));
  REQUIRE(d.size() == 5);
  const double expected[5] = {0.4375, 0.9375, 2.4375, 3.4375, 3.9375};
  const int mults[5] = {1, 2, 1, 1, 1};
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(d[i].lambda - expected[i]) < 1e-6);
    CHECK(d[i].normalized_multiplicity == mults[i]);
    CHECK(d[i].signature.n_minus == 2 * mults[i]);
    CHECK(d[i].signature.n_zero == 0);
  }

  // an eigenvalue landing exactly on the scan boundary is kept and flagged
  HillProblem ep(PotentialSpec::constant(Matrix::diagonal({2.0625}), kPi),
                 kPi / 2.0);
  auto e = hillmaslov::find_crossings_lambda(ep, kPi, 0.0, 2.0, grid_of(400));
  REQUIRE(e.size() == 3);
  CHECK(std::abs(e[0].lambda - 0.5) < 1e-6);
  CHECK(std::abs(e[1].lambda - 1.5) < 1e-6);
  CHECK(std::abs(e[2].lambda - 2.0) < 1e-6);
  CHECK_FALSE(e[0].at_endpoint);
  CHECK_FALSE(e[1].at_endpoint);
  CHECK(e[2].at_endpoint);
}

TEST_CASE("s scans find conjugate points") {
  HillProblem mp(mathieu_potential(), 0.1);
  auto recs = hillmaslov::find_crossings_s(mp, 0.0, 0.02, kPi, grid_of(800));
  REQUIRE(recs.size() == 2);
  CHECK(std::abs(recs[0].s - kConjA) < 1e-6);
  CHECK(std::abs(recs[1].s - kConjB) < 1e-6);
  for (const auto& r : recs) {
    CHECK(r.axis == Axis::s);
    CHECK(r.lambda == 0.0);
    CHECK(r.normalized_multiplicity == 1);
    CHECK(r.form_kind == FormKind::s_form);
    CHECK(r.signature.n_plus == 2);
    CHECK(r.signature.n_minus == 0);
    CHECK(r.signature.n_zero == 0);
    CHECK_FALSE(r.continuity_flagged);
    CHECK(r.location() == r.s);
  }

  // twist pi: the indicator dips are extremely steep (slope ~250) and only
  // the scalar trace path brackets them
  HillProblem mpi(mathieu_potential(), kPi);
  auto pr = hillmaslov::find_crossings_s(mpi, 0.0, 0.02, kPi, grid_of(800));
  REQUIRE(pr.size() == 2);
  CHECK(std::abs(pr[0].s - kConjPiA) < 1e-6);
  CHECK(std::abs(pr[1].s - kConjPiB) < 1e-6);
  CHECK(pr[0].normalized_multiplicity == 1);
  CHECK(pr[1].normalized_multiplicity == 1);
  CHECK(pr[0].signature.n_plus == 2);
  CHECK(pr[1].signature.n_plus == 2);

  // constant potential: conjugate points at |theta + 2 pi k| / (2 sqrt(nu))
  // (both rotation senses of the eigensolution meet the twist), and the form
  // reduces to 3.2 * I because the eigensolution modulus is constant in x
  HillProblem cp(PotentialSpec::constant(Matrix::diagonal({4.0}), kPi), 1.0);
  auto cr = hillmaslov::find_crossings_s(cp, 0.0, 0.1, kPi, grid_of(400));
  REQUIRE(cr.size() == 4);
  CHECK(std::abs(cr[0].s - 0.25) < 1e-6);
  CHECK(std::abs(cr[1].s - (2.0 * kPi - 1.0) / 4.0) < 1e-6);
  CHECK(std::abs(cr[2].s - (1.0 + 2.0 * kPi) / 4.0) < 1e-6);
  CHECK(std::abs(cr[3].s - (4.0 * kPi - 1.0) / 4.0) < 1e-6);
  for (const auto& r : cr) {
    CHECK(r.normalized_multiplicity == 1);
    CHECK((r.gram - 3.2 * Matrix::identity(2)).max_abs() < 1e-6);
  }

  // for y'' = 0 the twisted condition has no solution at any interval length
  HillProblem fpi(free_potential(), kPi);
  CHECK(hillmaslov::find_crossings_s(fpi, 0.0, 0.1, kPi, grid_of(200)).empty());
}

TEST_CASE("free-potential eigenvalue form matches the closed form") {
  // the eigensolution modulus is constant, so the form integral collapses to
  // -2s / (1 + omega^2) times the identity on an orthonormal kernel basis
  HillProblem fp(free_potential(), kPi / 2.0);
  auto recs = hillmaslov::find_crossings_lambda(fp, kPi, -1.0, -0.01, grid_of(400));
  REQUIRE(recs.size() == 2);
  CHECK(std::abs(recs[0].lambda - (-9.0 / 16.0)) < 1e-7);
  CHECK(std::abs(recs[1].lambda - (-1.0 / 16.0)) < 1e-7);
  Matrix q0 = (-2.0 * kPi * 16.0 / 25.0) * Matrix::identity(2);
  Matrix q1 = (-2.0 * kPi * 16.0 / 17.0) * Matrix::identity(2);
  CHECK((recs[0].gram - q0).max_abs() < 1e-6);
  CHECK((recs[1].gram - q1).max_abs() < 1e-6);
}

TEST_CASE("finite differences along the frame curve confirm both crossing forms") {
  HillProblem mp(mathieu_potential(), 0.1);
  std::vector<CrossingRecord> recs =
      hillmaslov::find_crossings_lambda(mp, kPi, 0.0, 4.0, grid_of(800));
  auto srecs = hillmaslov::find_crossings_s(mp, 0.0, 0.02, kPi, grid_of(800));
  recs.insert(recs.end(), srecs.begin(), srecs.end());
  REQUIRE(recs.size() == 4);
  for (const auto& r : recs) {
    Matrix fd = oracles::fd_crossing_form(mp, r);
    CHECK((fd - r.gram).max_abs() < 1e-4 * std::max(1.0, r.gram.max_abs()));
  }

  // multi-dimensional kernel at the coincidence of two constant branches
  HillProblem dp(PotentialSpec::constant(Matrix::diagonal({4.0, 1.0}), kPi),
                 kPi / 2.0);
  auto d = hillmaslov::find_crossings_lambda(dp, kPi, 0.9, 1.0, grid_of(50));
  REQUIRE(d.size() == 1);
  REQUIRE(d[0].normalized_multiplicity == 2);
  Matrix fd = oracles::fd_crossing_form(dp, d[0]);
  CHECK((fd - d[0].gram).max_abs() < 1e-4 * std::max(1.0, d[0].gram.max_abs()));

  // conjugate-point form
  HillProblem cp(PotentialSpec::constant(Matrix::diagonal({4.0}), kPi), 1.0);
  auto cr = hillmaslov::find_crossings_s(cp, 0.0, 0.1, 0.5, grid_of(50));
  REQUIRE(cr.size() == 1);
  Matrix fds = oracles::fd_crossing_form(cp, cr[0]);
  CHECK((fds - cr[0].gram).max_abs() < 1e-4 * std::max(1.0, cr[0].gram.max_abs()));
}

TEST_CASE("scan ranges with no spectrum stay empty") {
  auto pot = mathieu_potential();
  for (double theta : {0.5, kPi, 5.5}) {
    HillProblem prob(pot, theta);
    double s0 = 0.9 * hillmaslov::s_min_bound(pot, theta, 4.0);
    CHECK(hillmaslov::find_crossings_lambda(prob, s0, 0.0, 4.0, grid_of(300)).empty());
  }
  HillProblem mp(pot, 0.1);
  double s0 = 0.9 * hillmaslov::s_min_bound(pot, 0.1, 4.0);
  CHECK(hillmaslov::find_crossings_s(mp, 4.0, s0, kPi, grid_of(300)).empty());
}

TEST_CASE("propagator grids are shared across twist angles") {
  ScanCache cache;
  ScanSettings st = grid_of(800);

  HillProblem half(mathieu_potential(), kPi / 2.0);
  auto warm = hillmaslov::find_crossings_lambda(half, kPi, 0.0, 4.0, st, &cache);
  REQUIRE(warm.size() == 2);
  CHECK(std::abs(warm[0].lambda - kLambdaHalfA) < 1e-6);
  CHECK(std::abs(warm[1].lambda - kLambdaHalfB) < 1e-6);

  // a second twist reuses the cached grid; results are identical to an
  // uncached scan because refinement always re-evaluates fresh
  HillProblem mp(mathieu_potential(), 0.1);
  auto cached = hillmaslov::find_crossings_lambda(mp, kPi, 0.0, 4.0, st, &cache);
  auto plain = hillmaslov::find_crossings_lambda(mp, kPi, 0.0, 4.0, st, nullptr);
  REQUIRE(cached.size() == plain.size());
  REQUIRE(cached.size() == 2);
  for (std::size_t i = 0; i < cached.size(); ++i) {
    CHECK(cached[i].lambda == plain[i].lambda);
    CHECK(cached[i].s == plain[i].s);
    CHECK(cached[i].normalized_multiplicity == plain[i].normalized_multiplicity);
    CHECK((cached[i].gram - plain[i].gram).max_abs() == 0.0);
  }
}

TEST_CASE("scan argument validation") {
  HillProblem mp(mathieu_potential(), 0.1);
  CHECK_THROWS_AS(hillmaslov::find_crossings_lambda(mp, 0.0, 0.0, 4.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(hillmaslov::find_crossings_lambda(mp, 4.0, 0.0, 4.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(hillmaslov::find_crossings_lambda(mp, kPi, 2.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(hillmaslov::find_crossings_s(mp, 0.0, -0.1, kPi),
                  std::invalid_argument);
  CHECK_THROWS_AS(hillmaslov::find_crossings_s(mp, 0.0, 0.1, 4.0),
                  std::invalid_argument);
  ScanSettings bad;
  bad.grid = 1;
  CHECK_THROWS_AS(hillmaslov::find_crossings_lambda(mp, kPi, 0.0, 4.0, bad),
                  std::invalid_argument);
}
