#pragma once

#include <vector>

#include "hillmaslov/matrix.hpp"

namespace hillmaslov {

enum class PotentialRule { constant, mathieu, fourier, sampled };

// Symmetric matrix potential V(x) with period 2L, evaluated on [-L, L).
// Arguments outside the fundamental interval are reduced modulo the period.
class PotentialSpec {
 public:
  static PotentialSpec constant(Matrix v0, double half_period);
  // V(x) = amplitude * cos(angular_frequency * x), scalar (n = 1). The
  // frequency must be an integer multiple of pi / half_period so that the
  // potential is genuinely periodic on the interval.
  static PotentialSpec mathieu(double amplitude, double angular_frequency,
                               double half_period);
  // V(x) = cos_coeffs[0] + sum_k cos_coeffs[k] cos(pi k x / L)
  //                      + sum_k sin_coeffs[k-1] sin(pi k x / L)
  static PotentialSpec fourier(int n, double half_period,
                               std::vector<Matrix> cos_coeffs,
                               std::vector<Matrix> sin_coeffs);
  // Piecewise-linear interpolation through (xs[i], values[i]) with periodic
  // wrap-around; a repeated abscissa encodes a jump (right-continuous).
  static PotentialSpec sampled(double half_period, std::vector<double> xs,
                               std::vector<Matrix> values);

  int dim() const { return n_; }
  double half_period() const { return half_period_; }
  PotentialRule rule() const { return rule_; }

  Matrix operator()(double x) const;
  void eval_into(double x, double* out) const;  // n*n row-major

  // Largest spectral norm of V over a uniform sampling grid of the period.
  double sup_norm() const { return sup_norm_; }

  // max-abs difference of V across x at a small centered offset; nonzero
  // (beyond rounding) only at sampled-rule jumps.
  double continuity_jump(double x) const;

  // Sampled-rule node locations (all periodic copies) inside (a, b); empty
  // for smooth rules. The integrator aligns steps with these.
  std::vector<double> breakpoints_in(double a, double b) const;

 private:
  PotentialSpec() = default;
  void validate_and_finish();
  double reduce(double x) const;

  PotentialRule rule_ = PotentialRule::constant;
  int n_ = 0;
  double half_period_ = 0.0;
  double sup_norm_ = 0.0;

  Matrix v0_;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  std::vector<Matrix> cos_coeffs_;
  std::vector<Matrix> sin_coeffs_;
  std::vector<double> xs_;
  std::vector<Matrix> values_;
};

}  // namespace hillmaslov
