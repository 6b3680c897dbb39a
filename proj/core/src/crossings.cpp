#include "hillmaslov/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"

namespace hillmaslov {

namespace {

constexpr double kInvGolden = 0.6180339887498949;

double indicator_from_propagator(const Matrix& m, double theta, int n) {
  Matrix k = realify(m) - boundary_rotation(theta, n);
  return jacobi_svd(k).singular_values.back();
}

// One axis-parallel scan line through the (lambda, s) plane.
struct LineProblem {
  const HillProblem& prob;
  Axis axis;
  double fixed;  // s for Axis::lambda, lambda for Axis::s

  Matrix propagator_at(double t) const {
    return axis == Axis::lambda ? prob.propagator(t, fixed).m
                                : prob.propagator(fixed, t).m;
  }
  double lambda_of(double t) const { return axis == Axis::lambda ? t : fixed; }
  double s_of(double t) const { return axis == Axis::lambda ? fixed : t; }
  double indicator(double t) const {
    return indicator_from_propagator(propagator_at(t), prob.theta(), prob.dim());
  }
  // scalar-problem exact crossing function: trace(M) - 2 cos(theta)
  double trace_gap(double t) const {
    Matrix m = propagator_at(t);
    return m(0, 0) + m(1, 1) - 2.0 * std::cos(prob.theta());
  }
};

double refine_bisection(const LineProblem& line, double a, double b, double ga,
                        double gb, double tol) {
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  while (b - a > tol) {
    double mid = 0.5 * (a + b);
    double gm = line.trace_gap(mid);
    if (gm == 0.0) return mid;
    if ((ga < 0.0) != (gm < 0.0)) {
      b = mid;
      gb = gm;
    } else {
      a = mid;
      ga = gm;
    }
  }
  return 0.5 * (a + b);
}

// returns (argmin, min value)
std::pair<double, double> refine_golden(const LineProblem& line, double a, double b,
                                        double tol) {
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = line.indicator(x1);
  double f2 = line.indicator(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = line.indicator(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = line.indicator(x2);
    }
  }
  return {0.5 * (a + b), std::min(f1, f2)};
}

struct Located {
  double t = 0.0;
  MultiplicityResult mult;
};

struct Candidate {
  double lo = 0.0;
  double hi = 0.0;
  bool sign_change = false;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
};

MultiplicityResult multiplicity_on_line(const LineProblem& line, double t,
                                        double kernel_tol) {
  return multiplicity_at(line.prob, line.lambda_of(t), line.s_of(t), kernel_tol);
}

// Scans [lo, hi] with `grid` cells; refines and confirms candidates,
// recursively subdividing ambiguous cells.  `guard_siblings` additionally
// rescans the cell of every simple crossing found through the indicator
// path, so two distinct crossings sharing one top-level cell are separated.
// `parent_floor` is the indicator minimum of the enclosing candidate: a dip
// that stops deepening under subdivision is a near-miss, not a crossing, and
// the recursion on it is cut short.
void scan_range(const LineProblem& line, double lo, double hi, int grid, int depth,
                const ScanSettings& st, ScanCache* cache, bool guard_siblings,
                double parent_floor, std::vector<Located>& out) {
  int nodes = grid + 1;
  std::vector<double> ts(nodes);
  double h = (hi - lo) / grid;
  for (int i = 0; i < nodes; ++i) ts[i] = (i == grid) ? hi : lo + i * h;

  int n = line.prob.dim();
  double theta = line.prob.theta();
  std::vector<double> vals(nodes);
  std::vector<double> gaps(n == 1 ? nodes : 0);

  const std::vector<Matrix>* cached = nullptr;
  if (cache != nullptr)
    cached = &cache->grid_propagators(line.prob, line.axis, line.fixed, lo, hi, grid);
  double prop_scale = 1.0;
  for (int i = 0; i < nodes; ++i) {
    Matrix m = cached != nullptr ? (*cached)[static_cast<std::size_t>(i)]
                                 : line.propagator_at(ts[i]);
    vals[i] = indicator_from_propagator(m, theta, n);
    prop_scale = std::max(prop_scale, m.frob_norm());
    if (n == 1) gaps[i] = m(0, 0) + m(1, 1) - 2.0 * std::cos(theta);
  }

  std::vector<Candidate> cands;
  if (n == 1) {
    // trace-gap values below the integrator noise carry no sign information:
    // at a tangential touch the gap is quadratically small and rounding flips
    // it at random, so such cells are left to the indicator path
    double gap_floor = 1e-9 * prop_scale;
    for (int i = 0; i + 1 < nodes; ++i) {
      if (std::max(std::abs(gaps[i]), std::abs(gaps[i + 1])) < gap_floor) continue;
      if (gaps[i] == 0.0 || gaps[i] * gaps[i + 1] < 0.0)
        cands.push_back({ts[i], ts[i + 1], true, gaps[i], gaps[i + 1]});
    }
    if (gaps[nodes - 1] == 0.0 && std::abs(gaps[nodes - 2]) >= gap_floor)
      cands.push_back({ts[nodes - 2], ts[nodes - 1], true, gaps[nodes - 2],
                       gaps[nodes - 1]});
  }
  for (int i = 0; i < nodes; ++i) {
    bool left_ok = (i == 0) || vals[i] <= vals[i - 1];
    bool right_ok = (i == nodes - 1) || vals[i] <= vals[i + 1];
    if (left_ok && right_ok && vals[i] < st.indicator_threshold) {
      // skip minima that a sign-change candidate already brackets
      bool covered = false;
      for (const Candidate& c : cands)
        if (c.sign_change && ts[i] >= c.lo - h && ts[i] <= c.hi + h) covered = true;
      if (!covered)
        cands.push_back({ts[std::max(0, i - 1)], ts[std::min(nodes - 1, i + 1)],
                         false, 0.0, 0.0});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.lo < b.lo; });

  for (const Candidate& c : cands) {
    double loc;
    double min_val = -1.0;
    if (c.sign_change) {
      loc = refine_bisection(line, c.lo, c.hi, c.gap_lo, c.gap_hi, st.refine_tol);
    } else {
      auto refined = refine_golden(line, c.lo, c.hi, st.refine_tol);
      loc = refined.first;
      min_val = refined.second;
    }
    MultiplicityResult mult = multiplicity_on_line(line, loc, st.kernel_tol);

    if (mult.normalized_multiplicity == 1) {
      out.push_back({loc, std::move(mult)});
      if (guard_siblings && !c.sign_change && depth < st.max_subdivide_depth) {
        // look for a second crossing hiding in the same cell
        std::vector<Located> sub;
        scan_range(line, c.lo, c.hi, st.subdivide_grid, depth + 1, st, nullptr,
                   false, min_val, sub);
        for (Located& l : sub)
          if (std::abs(l.t - loc) > 10.0 * st.refine_tol)
            out.push_back(std::move(l));
      }
      continue;
    }

    if (mult.normalized_multiplicity >= 2) {
      // a higher-dimensional kernel is either one genuine multiple crossing
      // or several colliding simple ones; subdivision decides, and its
      // findings replace the direct measurement only when they actually
      // separate the cell into two or more crossings
      if (depth < st.max_subdivide_depth) {
        std::vector<Located> sub;
        scan_range(line, c.lo, c.hi, st.subdivide_grid, depth + 1, st, nullptr,
                   false, min_val, sub);
        if (sub.size() >= 2) {
          for (Located& l : sub) out.push_back(std::move(l));
          continue;
        }
      }
      out.push_back({loc, std::move(mult)});
      continue;
    }

    // no kernel at the refined point: recurse only while the dip keeps
    // deepening, otherwise it is a near-miss of the spectrum
    bool deepening = min_val >= 0.0 && min_val < 0.25 * parent_floor;
    if (depth < st.max_subdivide_depth && deepening) {
      std::vector<Located> sub;
      scan_range(line, c.lo, c.hi, st.subdivide_grid, depth + 1, st, nullptr, false,
                 min_val, sub);
      for (Located& l : sub) out.push_back(std::move(l));
    }
  }
}

}  // namespace

const std::vector<Matrix>& ScanCache::grid_propagators(const HillProblem& problem,
                                                       Axis axis, double fixed,
                                                       double lo, double hi,
                                                       int grid) {
  auto key = std::make_tuple(axis == Axis::lambda ? 0 : 1, problem.dim(),
                             problem.integrator().steps_per_period, fixed, lo, hi, grid);
  auto it = store_.find(key);
  if (it != store_.end()) return it->second;

  LineProblem line{problem, axis, fixed};
  std::vector<Matrix> ms;
  ms.reserve(static_cast<std::size_t>(grid) + 1);
  double h = (hi - lo) / grid;
  for (int i = 0; i <= grid; ++i)
    ms.push_back(line.propagator_at(i == grid ? hi : lo + i * h));
  return store_.emplace(key, std::move(ms)).first->second;
}

double crossing_indicator(const HillProblem& problem, double lambda, double s) {
  Matrix m = problem.propagator(lambda, s).m;
  return indicator_from_propagator(m, problem.theta(), problem.dim());
}

MultiplicityResult multiplicity_at(const HillProblem& problem, double lambda, double s,
                                   double kernel_tol) {
  Matrix m = problem.propagator(lambda, s).m;
  Matrix k = realify(m) - boundary_rotation(problem.theta(), problem.dim());
  SvdResult svd = jacobi_svd(k);
  int cols = k.cols();
  double sigma_max = cols > 0 ? svd.singular_values[0] : 0.0;
  double cut = std::max(kernel_tol, 1e-10 * sigma_max);
  int dim = 0;
  for (int j = 0; j < cols; ++j)
    if (svd.singular_values[j] <= cut) ++dim;
  if (dim % 2 != 0)
    throw NumericalError(
        "multiplicity_at: odd real kernel dimension; rescan with a tighter "
        "integrator");
  Matrix basis(cols, dim);
  int out = 0;
  for (int j = 0; j < cols; ++j) {
    if (svd.singular_values[j] > cut) continue;
    for (int r = 0; r < cols; ++r) basis(r, out) = svd.v(r, j);
    ++out;
  }
  MultiplicityResult res;
  res.normalized_multiplicity = dim / 2;
  res.kernel = std::move(basis);
  return res;
}

namespace {

Signature gram_signature(const Matrix& gram, double rank_tol) {
  return signature(gram, rank_tol * std::max(1.0, gram.max_abs()));
}

std::vector<CrossingRecord> find_crossings_axis(const HillProblem& problem, Axis axis,
                                                double fixed, double lo, double hi,
                                                const ScanSettings& st,
                                                ScanCache* cache) {
  if (!(lo < hi)) throw std::invalid_argument("find_crossings: empty range");
  if (st.grid < 2 || st.subdivide_grid < 2)
    throw std::invalid_argument("find_crossings: grid must have at least 2 cells");
  if (!(st.refine_tol > 0.0) || !(st.indicator_threshold > 0.0) ||
      !(st.kernel_tol > 0.0))
    throw std::invalid_argument("find_crossings: tolerances must be positive");
  if (axis == Axis::s && !(lo > 0.0))
    throw std::invalid_argument("find_crossings: s range must be positive");

  LineProblem line{problem, axis, fixed};
  std::vector<Located> found;
  scan_range(line, lo, hi, st.grid, 0, st, cache, true,
             std::numeric_limits<double>::infinity(), found);

  std::sort(found.begin(), found.end(),
            [](const Located& a, const Located& b) { return a.t < b.t; });
  std::vector<Located> unique;
  for (Located& l : found) {
    if (!unique.empty() && std::abs(l.t - unique.back().t) <= 10.0 * st.refine_tol)
      continue;
    unique.push_back(std::move(l));
  }

  std::vector<CrossingRecord> records;
  records.reserve(unique.size());
  for (Located& l : unique) {
    CrossingRecord rec;
    rec.axis = axis;
    rec.lambda = line.lambda_of(l.t);
    rec.s = line.s_of(l.t);
    rec.normalized_multiplicity = l.mult.normalized_multiplicity;
    rec.kernel = std::move(l.mult.kernel);
    rec.form_kind = axis == Axis::lambda ? FormKind::lambda_form : FormKind::s_form;
    rec.at_endpoint =
        std::abs(l.t - lo) <= st.endpoint_tol || std::abs(hi - l.t) <= st.endpoint_tol;
    if (axis == Axis::lambda) {
      rec.gram = crossing_form_lambda(problem, rec);
    } else {
      const PotentialSpec& pot = problem.potential();
      double jump_tol = 1e-6 * std::max(1.0, pot.sup_norm());
      rec.continuity_flagged = pot.continuity_jump(-rec.s) > jump_tol ||
                               pot.continuity_jump(rec.s) > jump_tol;
      rec.gram = crossing_form_s(problem, rec);
    }
    rec.signature = gram_signature(rec.gram, st.form_rank_tol);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

std::vector<CrossingRecord> find_crossings_lambda(const HillProblem& problem, double s,
                                                  double lo, double hi,
                                                  const ScanSettings& settings,
                                                  ScanCache* cache) {
  if (!(s > 0.0) || s > problem.half_period() + 1e-9)
    throw std::invalid_argument("find_crossings_lambda: s outside (0, L]");
  return find_crossings_axis(problem, Axis::lambda, s, lo, hi, settings, cache);
}

std::vector<CrossingRecord> find_crossings_s(const HillProblem& problem, double lambda,
                                             double lo, double hi,
                                             const ScanSettings& settings,
                                             ScanCache* cache) {
  if (hi > problem.half_period() + 1e-9)
    throw std::invalid_argument("find_crossings_s: range exceeds L");
  return find_crossings_axis(problem, Axis::s, lambda, lo, hi, settings, cache);
}

Matrix crossing_form_lambda(const HillProblem& problem, const CrossingRecord& record) {
  int n = problem.dim();
  int kdim = record.kernel.cols();
  if (record.kernel.rows() != 4 * n || kdim == 0)
    throw std::invalid_argument("crossing_form_lambda: malformed kernel");
  double s = record.s;
  double lambda = record.lambda;

  // de-interleave kernel vectors into (Re, Im) column pairs: z maps to the
  // 2n x 2 matrix [Re z | Im z]; trajectories are propagated in that form
  Matrix w(2 * n, 2 * kdim);
  for (int i = 0; i < kdim; ++i)
    for (int k = 0; k < 2 * n; ++k) {
      w(k, 2 * i) = record.kernel(2 * k, i);
      w(k, 2 * i + 1) = record.kernel(2 * k + 1, i);
    }

  // Gram of the position parts at the current point
  auto position_gram = [&](const Matrix& y) {
    Matrix g(kdim, kdim);
    for (int i = 0; i < kdim; ++i)
      for (int j = i; j < kdim; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
          for (int c = 0; c < 2; ++c) acc += y(k, 2 * i + c) * y(k, 2 * j + c);
        g(i, j) = acc;
        g(j, i) = acc;
      }
    return g;
  };

  // composite Simpson along the integrator grid, split at potential kinks
  Matrix q(kdim, kdim);
  std::vector<double> cuts = problem.potential().breakpoints_in(-s, s);
  std::vector<double> seg;
  seg.push_back(-s);
  seg.insert(seg.end(), cuts.begin(), cuts.end());
  seg.push_back(s);

  const IntegratorSettings& integ = problem.integrator();
  double period = 2.0 * problem.half_period();
  for (std::size_t si = 0; si + 1 < seg.size(); ++si) {
    double x0 = seg[si], x1 = seg[si + 1];
    int steps = std::max(
        2, static_cast<int>(std::ceil(integ.steps_per_period * (x1 - x0) / period)));
    if (steps % 2 != 0) ++steps;
    double h = (x1 - x0) / steps;

    for (int j = 0; j <= steps; ++j) {
      double weight = (j == 0 || j == steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      q += (weight * h / 3.0) * position_gram(w);
      if (j == steps) break;
      double x = x0 + j * h;
      Matrix k1 = problem.coefficient_matrix(x, lambda) * w;
      Matrix k2 = problem.coefficient_matrix(x + 0.5 * h, lambda) * (w + (0.5 * h) * k1);
      Matrix k3 = problem.coefficient_matrix(x + 0.5 * h, lambda) * (w + (0.5 * h) * k2);
      Matrix k4 = problem.coefficient_matrix(x + h, lambda) * (w + h * k3);
      w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return -1.0 * q;
}

Matrix crossing_form_s(const HillProblem& problem, const CrossingRecord& record) {
  int n = problem.dim();
  int kdim = record.kernel.cols();
  if (record.kernel.rows() != 4 * n || kdim == 0)
    throw std::invalid_argument("crossing_form_s: malformed kernel");
  double s = record.s;
  double lambda = record.lambda;

  Matrix vbar = 0.5 * (problem.potential()(-s) + problem.potential()(s));
  Matrix op = kron(vbar, Matrix::identity(2)) - lambda * Matrix::identity(2 * n);

  Matrix q(kdim, kdim);
  for (int i = 0; i < kdim; ++i)
    for (int j = i; j < kdim; ++j) {
      double pp = 0.0;
      for (int r = 0; r < 2 * n; ++r) {
        double opj = 0.0;
        for (int c = 0; c < 2 * n; ++c) opj += op(r, c) * record.kernel(c, j);
        pp += record.kernel(r, i) * opj;
      }
      double qq = 0.0;
      for (int r = 2 * n; r < 4 * n; ++r)
        qq += record.kernel(r, i) * record.kernel(r, j);
      q(i, j) = 2.0 * pp + 2.0 * qq;
      q(j, i) = q(i, j);
    }
  return q;
}

}  // namespace hillmaslov
