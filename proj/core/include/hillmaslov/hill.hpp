#pragma once

#include <optional>

#include "hillmaslov/matrix.hpp"
#include "hillmaslov/potential.hpp"

namespace hillmaslov {

struct IntegratorSettings {
  int steps_per_period = 4096;  // RK4 steps across [-L, L]
  double check_tol = 1e-6;      // allowed step-halving disagreement

  bool operator==(const IntegratorSettings&) const = default;
};

// Transfer matrix of y' = A(x, lambda) y from -s to s, in the complex-system
// coordinates (y, y'); real 2n x 2n since V and lambda are real.
struct Propagator {
  double lambda = 0.0;
  double s = 0.0;
  Matrix m;
};

// Value of the boundary-rotation flow at x: I_2n kron U(theta (x + L) / 2s).
struct RotationFlow {
  double s = 0.0;
  double theta = 0.0;
  double x = 0.0;
  Matrix m;
};

// 2x2 rotation by alpha, [[cos, -sin], [sin, cos]].
Matrix rotation2(double alpha);

// Realification with interleaved (Re, Im) pairs: m kron I_2.
Matrix realify(const Matrix& m);

// I_2n kron U(theta), the twist applied to realified boundary data.
Matrix boundary_rotation(double theta, int n);

RotationFlow rotation_flow(double s, double theta, double x, double half_period, int n);

// Scan ceiling policy: 1.25 * sup-norm of V with floor 1.0.
double lambda_inf_default(const PotentialSpec& potential);

// Interval half-length below which the twisted problem on [-s, s] has no
// spectrum in [0, lambda_max]; requires theta strictly inside (0, 2 pi).
double s_min_bound(const PotentialSpec& potential, double theta, double lambda_max);

class HillProblem {
 public:
  struct Options {
    std::optional<double> lambda_max;
    std::optional<double> s_min;
    IntegratorSettings integrator;
  };

  HillProblem(PotentialSpec potential, double theta);
  HillProblem(PotentialSpec potential, double theta, Options options);

  const PotentialSpec& potential() const { return potential_; }
  double theta() const { return theta_; }
  int dim() const { return potential_.dim(); }
  double half_period() const { return potential_.half_period(); }
  double lambda_max() const { return lambda_max_; }
  double s_min() const { return s_min_; }
  bool s_min_explicit() const { return s_min_explicit_; }
  const IntegratorSettings& integrator() const { return integrator_; }

  HillProblem with_theta(double theta) const;
  HillProblem with_s_min(double s_min) const;

  // [[0, I], [lambda I - V(x), 0]], 2n x 2n.
  Matrix coefficient_matrix(double x, double lambda) const;

  // Fundamental solution from a to b (either order), fixed-step RK4 with a
  // step-halving verification pass; sampled-rule breakpoints are forced to
  // land on step boundaries. Throws IntegrationError on disagreement.
  Matrix fundamental_matrix(double lambda, double a, double b) const;

  Propagator propagator(double lambda, double s) const;

  Matrix rotation_flow_matrix(double s, double x) const;
  Matrix boundary_rotation_matrix() const;

 private:
  PotentialSpec potential_;
  double theta_ = 0.0;
  double lambda_max_ = 0.0;
  double s_min_ = 0.0;
  bool s_min_explicit_ = false;
  IntegratorSettings integrator_;
};

}  // namespace hillmaslov
