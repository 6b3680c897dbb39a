#include "hillmaslov/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"

namespace hillmaslov {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool interior_twist(double theta) { return theta > 0.0 && theta < 2.0 * kPi; }

std::string format_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Signed and unsigned accumulation over an edge's crossings, with half
// weights at interval endpoints.  The crossing forms are differentiated with
// respect to the growing scan parameter; the edge orientation converts them
// to the walk direction.
void accumulate(CurveSummary& out) {
  double signed_sum = 0.0;
  double count = 0.0;
  bool regular = true;
  for (const CrossingRecord& r : out.crossings) {
    double weight = r.at_endpoint ? 0.5 : 1.0;
    if (r.signature.n_zero > 0) regular = false;
    signed_sum += weight * 0.5 * static_cast<double>(r.signature.n_plus - r.signature.n_minus);
    count += weight * static_cast<double>(r.normalized_multiplicity);
  }
  out.regular = regular;
  out.count = count;
  out.index = regular ? out.geometry.orientation * signed_sum : 0.0;
}

bool near_lo_endpoint(const CrossingRecord& r, const EdgeGeometry& g) {
  return r.at_endpoint && r.location() < 0.5 * (g.lo + g.hi);
}

bool near_hi_endpoint(const CrossingRecord& r, const EdgeGeometry& g) {
  return r.at_endpoint && r.location() >= 0.5 * (g.lo + g.hi);
}

// A crossing at the rectangle's left-top corner (lambda = 0, s = L) means
// zero is a twist eigenvalue, which breaks the Morse-index hypotheses.
bool corner_degenerate(const MaslovReport& rep) {
  const CurveSummary& top = rep.edge(Edge::top);
  for (const CrossingRecord& r : top.crossings)
    if (near_lo_endpoint(r, top.geometry)) return true;
  const CurveSummary& left = rep.edge(Edge::left);
  for (const CrossingRecord& r : left.crossings)
    if (near_hi_endpoint(r, left.geometry)) return true;
  return false;
}

// Bottom-edge height for twist 0 / 2 pi: halve from L/8 until the bottom-edge
// crossing count equals the matrix Morse index of V(0) twice in a row.
double stabilized_s0(const HillProblem& problem, const std::optional<int>& morse_v0,
                     const ReportOptions& options, std::vector<std::string>& flags,
                     ScanCache* cache) {
  double s0 = problem.half_period() / 8.0;
  if (!morse_v0) {
    flags.push_back("bottom-edge height search skipped: matrix morse index of V(0) unavailable");
    return s0;
  }
  double target = static_cast<double>(*morse_v0);
  auto count_at = [&](double s) {
    return edge_summary(problem, Edge::bottom, s, options.scan, cache).count;
  };
  double here = count_at(s0);
  for (int k = 0; k < std::max(1, options.stabilization_halvings); ++k) {
    double next = count_at(0.5 * s0);
    if (here == target && next == target) return s0;
    s0 *= 0.5;
    here = next;
  }
  flags.push_back("bottom-edge count did not stabilize at the matrix morse index of V(0); using s0 = " +
                  format_value(s0));
  return s0;
}

IdentityCheck equality(std::string name, double lhs, double rhs, bool applicable) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.applicable = applicable;
  c.passed = applicable && lhs == rhs;
  return c;
}

IdentityCheck upper_bound(std::string name, double lhs, double rhs, bool applicable) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.applicable = applicable;
  c.passed = applicable && lhs <= rhs;
  return c;
}

double gram_mean_eigenvalue(const CrossingRecord& r) {
  double trace = 0.0;
  int dim = r.gram.rows();
  for (int i = 0; i < dim; ++i) trace += r.gram(i, i);
  return dim > 0 ? trace / static_cast<double>(dim) : 0.0;
}

}  // namespace

const char* edge_name(Edge which) {
  switch (which) {
    case Edge::bottom: return "bottom";
    case Edge::right: return "right";
    case Edge::top: return "top";
    case Edge::left: return "left";
  }
  return "unknown";
}

EdgeGeometry edge_geometry(const HillProblem& problem, Edge which, double s0) {
  double l = problem.half_period();
  if (!(s0 > 0.0) || s0 > l)
    throw std::invalid_argument("edge_geometry: s0 outside (0, L]");
  double lambda_max = problem.lambda_max();
  EdgeGeometry g;
  switch (which) {
    case Edge::bottom:
      g = {Axis::lambda, s0, 0.0, lambda_max, 1};
      break;
    case Edge::right:
      g = {Axis::s, lambda_max, s0, l, 1};
      break;
    case Edge::top:
      g = {Axis::lambda, l, 0.0, lambda_max, -1};
      break;
    case Edge::left:
      g = {Axis::s, 0.0, s0, l, -1};
      break;
  }
  return g;
}

CurveSummary edge_summary(const HillProblem& problem, Edge which, double s0,
                          const ScanSettings& settings, ScanCache* cache) {
  CurveSummary out;
  out.which = which;
  out.geometry = edge_geometry(problem, which, s0);
  out.crossings = out.geometry.axis == Axis::lambda
                      ? find_crossings_lambda(problem, out.geometry.fixed, out.geometry.lo,
                                              out.geometry.hi, settings, cache)
                      : find_crossings_s(problem, out.geometry.fixed, out.geometry.lo,
                                         out.geometry.hi, settings, cache);
  accumulate(out);
  return out;
}

int morse_index_matrix(const Matrix& v, double tol) {
  if (v.empty() || v.rows() != v.cols())
    throw std::invalid_argument("morse_index_matrix: need a nonempty square matrix");
  double scale = std::max(1.0, v.max_abs());
  if ((v - v.transpose()).max_abs() > 1e-12 * scale)
    throw std::invalid_argument("morse_index_matrix: matrix is not symmetric");
  EigenResult eig = eig_symmetric(v);
  double cut = tol * scale;
  int count = 0;
  for (const std::complex<double>& eigenvalue : eig.values) {
    double value = eigenvalue.real();
    if (std::abs(value) <= cut)
      throw NumericalError("morse_index_matrix: eigenvalue " + format_value(value) +
                           " within tolerance of zero");
    if (value > 0.0) ++count;
  }
  return count;
}

int morse_index_theta(const HillProblem& problem, const ScanSettings& settings,
                      ScanCache* cache) {
  CurveSummary top = edge_summary(problem, Edge::top, problem.s_min(), settings, cache);
  for (const CrossingRecord& r : top.crossings) {
    if (near_lo_endpoint(r, top.geometry))
      throw NumericalError("morse_index_theta: zero is an eigenvalue within tolerance; "
                           "perturb the twist");
    if (near_hi_endpoint(r, top.geometry))
      throw NumericalError("morse_index_theta: eigenvalue at the lambda ceiling; raise lambda_max");
  }
  double count = top.count;
  if (count != std::round(count))
    throw NumericalError("morse_index_theta: non-integral eigenvalue count");
  return static_cast<int>(std::round(count));
}

bool MaslovReport::all_passed() const {
  if (!flags.empty()) return false;
  for (const IdentityCheck& c : identities)
    if (c.applicable && !c.passed) return false;
  return true;
}

double stabilized_bottom_height(const HillProblem& problem, const ReportOptions& options,
                                std::vector<std::string>& flags, ScanCache* cache) {
  ScanCache local_cache;
  if (!cache) cache = &local_cache;
  std::optional<int> morse_v0;
  try {
    morse_v0 = morse_index_matrix(problem.potential()(0.0));
  } catch (const std::exception&) {
  }
  return stabilized_s0(problem, morse_v0, options, flags, cache);
}

MaslovReport full_report(const HillProblem& problem, const ReportOptions& options,
                         ScanCache* cache) {
  ScanCache local_cache;
  if (!cache) cache = &local_cache;
  if (options.s0 && (!(*options.s0 > 0.0) || *options.s0 > problem.half_period()))
    throw std::invalid_argument("full_report: s0 override outside (0, L]");
  if (options.corner_epsilon < 0.0)
    throw std::invalid_argument("full_report: corner_epsilon must be nonnegative");

  HillProblem prob = problem;
  std::vector<std::string> notes;
  std::vector<std::string> flags;
  MaslovReport rep;
  bool corner = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    bool boundary = !interior_twist(prob.theta());

    std::optional<int> morse_v0;
    std::string morse_v0_issue;
    try {
      morse_v0 = morse_index_matrix(prob.potential()(0.0));
    } catch (const std::exception& e) {
      morse_v0_issue = e.what();
    }

    double s0 = 0.0;
    if (options.s0)
      s0 = *options.s0;
    else if (prob.s_min_explicit() || !boundary)
      s0 = prob.s_min();
    else
      s0 = stabilized_s0(prob, morse_v0, options, flags, cache);

    rep = MaslovReport{};
    rep.theta = prob.theta();
    rep.s0 = s0;
    rep.lambda_max = prob.lambda_max();
    rep.morse_v0 = morse_v0;
    if (boundary && !morse_v0)
      flags.push_back("matrix morse index of V(0) unavailable: " + morse_v0_issue);

    for (Edge which : {Edge::bottom, Edge::right, Edge::top, Edge::left})
      rep.edges[static_cast<int>(which)] = edge_summary(prob, which, s0, options.scan, cache);

    corner = corner_degenerate(rep);
    if (corner && attempt == 0 && options.corner_epsilon > 0.0) {
      double theta = prob.theta();
      double shifted = theta + options.corner_epsilon <= 2.0 * kPi
                           ? theta + options.corner_epsilon
                           : theta - options.corner_epsilon;
      notes.push_back("zero is an eigenvalue at twist " + format_value(theta) +
                      "; twist shifted to " + format_value(shifted));
      prob = prob.with_theta(shifted);
      continue;
    }
    if (corner)
      flags.push_back("crossing at lambda = 0 persists after the twist shift");
    break;
  }

  bool interior = interior_twist(rep.theta);
  for (const CurveSummary& edge : rep.edges)
    if (!edge.regular)
      flags.push_back(std::string("degenerate crossing form on the ") + edge_name(edge.which) +
                      " edge; its index is undefined");

  const CurveSummary& top = rep.edge(Edge::top);
  bool top_ceiling = false;
  for (const CrossingRecord& r : top.crossings)
    if (near_hi_endpoint(r, top.geometry)) top_ceiling = true;
  if (top_ceiling)
    flags.push_back("eigenvalue within tolerance of lambda_max; raise the ceiling");
  if (!corner && !top_ceiling && top.count == std::round(top.count))
    rep.morse = static_cast<int>(std::round(top.count));
  else if (!corner && !top_ceiling)
    flags.push_back("non-integral eigenvalue count");

  double a1 = rep.edge(Edge::bottom).index, b1 = rep.edge(Edge::bottom).count;
  double a2 = rep.edge(Edge::right).index, b2 = rep.edge(Edge::right).count;
  double a3 = rep.edge(Edge::top).index, b3 = rep.edge(Edge::top).count;
  double a4 = rep.edge(Edge::left).index;
  bool all_regular = true;
  double bound_gap = -std::numeric_limits<double>::infinity();
  for (const CurveSummary& edge : rep.edges) {
    all_regular = all_regular && edge.regular;
    bound_gap = std::max(bound_gap, std::abs(edge.index) - edge.count);
  }

  rep.identities.push_back(equality("index_sum_zero", a1 + a2 + a3 + a4, 0.0, all_regular));
  rep.identities.push_back(
      equality("top_index_equals_count", a3, b3, rep.edge(Edge::top).regular && !corner));
  rep.identities.push_back(equality("bottom_index_equals_minus_count", a1, -b1,
                                    rep.edge(Edge::bottom).regular));
  rep.identities.push_back(equality("right_edge_empty", std::abs(a2) + b2, 0.0,
                                    rep.lambda_max > problem.potential().sup_norm()));
  rep.identities.push_back(equality("interior_balance", a3 + a4, 0.0,
                                    interior && all_regular && b1 == 0.0 && b2 == 0.0));
  bool morse_applicable =
      rep.morse >= 0 && all_regular && (interior || rep.morse_v0.has_value());
  double morse_rhs = interior ? -a4 : -a4 + static_cast<double>(rep.morse_v0.value_or(0));
  rep.identities.push_back(equality("morse_index_formula", static_cast<double>(rep.morse),
                                    morse_rhs, morse_applicable));
  rep.identities.push_back(upper_bound("index_bounded_by_count", bound_gap, 0.0, all_regular));

  rep.notes = std::move(notes);
  rep.flags = std::move(flags);
  return rep;
}

std::vector<SweepRow> sweep_theta(const HillProblem& problem,
                                  const std::vector<double>& thetas,
                                  const ReportOptions& options, ScanCache* cache) {
  ScanCache local_cache;
  if (!cache) cache = &local_cache;
  for (double theta : thetas)
    if (theta < 0.0 || theta > 2.0 * kPi)
      throw std::invalid_argument("sweep_theta: twist outside [0, 2 pi]");

  // One left-edge height for every interior row: below each row's own default
  // height the interval problem has no spectrum in the scan window, so the
  // shared, smaller height finds the same crossings and keys one cached grid.
  double shared_lo = std::numeric_limits<double>::infinity();
  for (double theta : thetas)
    if (interior_twist(theta))
      shared_lo = std::min(shared_lo, 0.9 * s_min_bound(problem.potential(), theta,
                                                        problem.lambda_max()));
  if (options.s0) shared_lo = *options.s0;

  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (double theta : thetas) {
    SweepRow row;
    row.theta = theta;
    try {
      if (!interior_twist(theta)) {
        row.full_pathway = true;
        MaslovReport rep = full_report(problem.with_theta(theta), options, cache);
        row.s0 = rep.s0;
        for (const CrossingRecord& r : rep.edge(Edge::top).crossings)
          row.eigenvalues.push_back(r.lambda);
        for (const CrossingRecord& r : rep.edge(Edge::left).crossings) {
          row.conjugate_points.push_back(r.s);
          row.conjugate_form_values.push_back(gram_mean_eigenvalue(r));
        }
        row.top_count = rep.edge(Edge::top).count;
        row.left_count = rep.edge(Edge::left).count;
        for (const CurveSummary& edge : rep.edges) row.index_sum += edge.index;
        row.identities_pass = rep.all_passed();
        row.flags = rep.flags;
      } else {
        HillProblem prob = problem.with_theta(theta);
        CurveSummary top = edge_summary(prob, Edge::top, shared_lo, options.scan, cache);
        CurveSummary left = edge_summary(prob, Edge::left, shared_lo, options.scan, cache);
        row.s0 = shared_lo;
        double own_bound =
            0.9 * s_min_bound(prob.potential(), theta, prob.lambda_max());
        for (const CrossingRecord& r : top.crossings) row.eigenvalues.push_back(r.lambda);
        for (const CrossingRecord& r : left.crossings) {
          row.conjugate_points.push_back(r.s);
          row.conjugate_form_values.push_back(gram_mean_eigenvalue(r));
          if (!options.s0 && r.s < own_bound)
            row.flags.push_back("conjugate point below the no-spectrum bound at s = " +
                                format_value(r.s));
        }
        row.top_count = top.count;
        row.left_count = left.count;
        row.index_sum = top.index + left.index;
        bool corner = false;
        for (const CrossingRecord& r : top.crossings)
          if (near_lo_endpoint(r, top.geometry)) corner = true;
        for (const CrossingRecord& r : left.crossings)
          if (near_hi_endpoint(r, left.geometry)) corner = true;
        if (corner) row.flags.push_back("zero is an eigenvalue (corner crossing)");
        row.identities_pass = top.regular && left.regular && !corner &&
                              row.index_sum == 0.0 && top.index == top.count &&
                              row.flags.empty();
      }
    } catch (const NumericalError& e) {
      row.flags.push_back(std::string("row failed: ") + e.what());
      row.identities_pass = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hillmaslov
