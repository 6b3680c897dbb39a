#include "hillmaslov/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"

namespace hillmaslov {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_symmetric_matrix(const Matrix& v, int n, const char* what) {
  if (v.rows() != n || v.cols() != n)
    throw std::invalid_argument(std::string(what) + ": wrong matrix shape");
  double scale = std::max(1.0, v.max_abs());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(v(i, j) - v(j, i)) > 1e-12 * scale)
        throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
}

Matrix symmetrized(const Matrix& v) { return 0.5 * (v + v.transpose()); }

double spectral_norm_symmetric(const Matrix& v) {
  double m = 0.0;
  for (const auto& ev : eig_symmetric(v).values) m = std::max(m, std::abs(ev.real()));
  return m;
}

}  // namespace

PotentialSpec PotentialSpec::constant(Matrix v0, double half_period) {
  PotentialSpec p;
  p.rule_ = PotentialRule::constant;
  p.n_ = v0.rows();
  p.half_period_ = half_period;
  require_symmetric_matrix(v0, p.n_, "PotentialSpec::constant");
  p.v0_ = symmetrized(v0);
  p.validate_and_finish();
  return p;
}

PotentialSpec PotentialSpec::mathieu(double amplitude, double angular_frequency,
                                     double half_period) {
  PotentialSpec p;
  p.rule_ = PotentialRule::mathieu;
  p.n_ = 1;
  p.half_period_ = half_period;
  p.amplitude_ = amplitude;
  p.frequency_ = angular_frequency;
  if (half_period > 0.0) {
    double harmonics = angular_frequency * half_period / kPi;
    if (std::abs(harmonics - std::round(harmonics)) > 1e-9)
      throw std::invalid_argument(
          "PotentialSpec::mathieu: frequency breaks periodicity on [-L, L]");
  }
  p.validate_and_finish();
  return p;
}

PotentialSpec PotentialSpec::fourier(int n, double half_period,
                                     std::vector<Matrix> cos_coeffs,
                                     std::vector<Matrix> sin_coeffs) {
  PotentialSpec p;
  p.rule_ = PotentialRule::fourier;
  p.n_ = n;
  p.half_period_ = half_period;
  if (cos_coeffs.empty())
    throw std::invalid_argument("PotentialSpec::fourier: missing constant term");
  for (auto& c : cos_coeffs) {
    require_symmetric_matrix(c, n, "PotentialSpec::fourier");
    c = symmetrized(c);
  }
  for (auto& s : sin_coeffs) {
    require_symmetric_matrix(s, n, "PotentialSpec::fourier");
    s = symmetrized(s);
  }
  p.cos_coeffs_ = std::move(cos_coeffs);
  p.sin_coeffs_ = std::move(sin_coeffs);
  p.validate_and_finish();
  return p;
}

PotentialSpec PotentialSpec::sampled(double half_period, std::vector<double> xs,
                                     std::vector<Matrix> values) {
  PotentialSpec p;
  p.rule_ = PotentialRule::sampled;
  p.half_period_ = half_period;
  if (xs.empty() || xs.size() != values.size())
    throw std::invalid_argument("PotentialSpec::sampled: empty or mismatched grid");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("PotentialSpec::sampled: grid not ascending");
  if (xs.front() < -half_period || xs.back() > half_period)
    throw std::invalid_argument("PotentialSpec::sampled: grid outside [-L, L]");
  p.n_ = values.front().rows();
  for (auto& v : values) {
    require_symmetric_matrix(v, p.n_, "PotentialSpec::sampled");
    v = symmetrized(v);
  }
  p.xs_ = std::move(xs);
  p.values_ = std::move(values);
  p.validate_and_finish();
  return p;
}

void PotentialSpec::validate_and_finish() {
  if (n_ < 1) throw std::invalid_argument("PotentialSpec: dimension must be >= 1");
  if (!(half_period_ > 0.0))
    throw std::invalid_argument("PotentialSpec: half period must be positive");

  const int grid = 1024;
  double sup = 0.0;
  for (int k = 0; k <= grid; ++k) {
    double x = -half_period_ + 2.0 * half_period_ * k / grid;
    sup = std::max(sup, spectral_norm_symmetric((*this)(x)));
  }
  sup_norm_ = sup;
}

double PotentialSpec::reduce(double x) const {
  double l = half_period_;
  double y = x - 2.0 * l * std::floor((x + l) / (2.0 * l));
  if (y >= l) y -= 2.0 * l;  // guard against rounding at the seam
  return y;
}

Matrix PotentialSpec::operator()(double x) const {
  Matrix v(n_, n_);
  eval_into(x, v.data());
  return v;
}

void PotentialSpec::eval_into(double x, double* out) const {
  double y = reduce(x);
  int nn = n_ * n_;
  switch (rule_) {
    case PotentialRule::constant: {
      const double* src = v0_.data();
      for (int k = 0; k < nn; ++k) out[k] = src[k];
      return;
    }
    case PotentialRule::mathieu: {
      out[0] = amplitude_ * std::cos(frequency_ * y);
      return;
    }
    case PotentialRule::fourier: {
      for (int k = 0; k < nn; ++k) out[k] = cos_coeffs_[0].data()[k];
      for (std::size_t k = 1; k < cos_coeffs_.size(); ++k) {
        double c = std::cos(kPi * static_cast<double>(k) * y / half_period_);
        const double* src = cos_coeffs_[k].data();
        for (int t = 0; t < nn; ++t) out[t] += c * src[t];
      }
      for (std::size_t k = 1; k <= sin_coeffs_.size(); ++k) {
        double s = std::sin(kPi * static_cast<double>(k) * y / half_period_);
        const double* src = sin_coeffs_[k - 1].data();
        for (int t = 0; t < nn; ++t) out[t] += s * src[t];
      }
      return;
    }
    case PotentialRule::sampled: {
      // locate the segment [xs[i], xs[i+1]] containing y, wrapping across
      // the period seam; a duplicated abscissa is taken right-continuously
      double x0, x1;
      const Matrix *v0, *v1;
      if (y < xs_.front()) {
        x0 = xs_.back() - 2.0 * half_period_;
        x1 = xs_.front();
        v0 = &values_.back();
        v1 = &values_.front();
      } else if (y >= xs_.back()) {
        x0 = xs_.back();
        x1 = xs_.front() + 2.0 * half_period_;
        v0 = &values_.back();
        v1 = &values_.front();
      } else {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
        std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
        std::size_t lo = hi - 1;
        x0 = xs_[lo];
        x1 = xs_[hi];
        v0 = &values_[lo];
        v1 = &values_[hi];
      }
      double t = (x1 > x0) ? (y - x0) / (x1 - x0) : 0.0;
      const double* a = v0->data();
      const double* b = v1->data();
      for (int k = 0; k < nn; ++k) out[k] = (1.0 - t) * a[k] + t * b[k];
      return;
    }
  }
}

double PotentialSpec::continuity_jump(double x) const {
  // second difference: ~|jump| at a discontinuity, O(delta) at a slope kink
  // and O(delta^2) where the potential is smooth, so neither is mistaken for
  // a jump
  double delta = std::max(1e-7 * 2.0 * half_period_, 1e-12);
  Matrix diff = (*this)(x + delta) + (*this)(x - delta) - 2.0 * (*this)(x);
  return diff.max_abs();
}

std::vector<double> PotentialSpec::breakpoints_in(double a, double b) const {
  std::vector<double> pts;
  if (rule_ != PotentialRule::sampled || a == b) return pts;
  double lo = std::min(a, b), hi = std::max(a, b);
  double period = 2.0 * half_period_;
  for (double base : xs_) {
    double start = base + period * std::ceil((lo - base) / period);
    for (double x = start; x < hi; x += period) {
      if (x > lo) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double p, double q) { return std::abs(p - q) < 1e-13; }),
            pts.end());
  return pts;
}

}  // namespace hillmaslov
