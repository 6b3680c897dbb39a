#include "hillmaslov/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/linalg.hpp"

namespace hillmaslov {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string csv_num(double value) {
  if (value == 0.0) return "0";  // never print the sign of a negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// Status fields must not break the row structure.
std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string join_status(const std::vector<std::string>& parts) {
  if (parts.empty()) return "ok";
  std::string out;
  for (const std::string& part : parts) {
    if (!out.empty()) out += ';';
    out += sanitize(part);
  }
  return out;
}

// Ascending crossing-form eigenvalues, ';'-separated.
std::string gram_values(const CrossingRecord& record) {
  EigenResult eig = eig_symmetric(record.gram);
  std::vector<double> values;
  values.reserve(eig.values.size());
  for (const auto& value : eig.values) values.push_back(value.real());
  std::sort(values.begin(), values.end());
  std::string out;
  for (double value : values) {
    if (!out.empty()) out += ';';
    out += csv_num(value);
  }
  return out;
}

std::string crossing_status(const CrossingRecord& record) {
  std::vector<std::string> parts;
  if (record.signature.n_zero > 0) parts.push_back("degenerate-form");
  if (record.at_endpoint) parts.push_back("endpoint");
  if (record.continuity_flagged) parts.push_back("continuity-flagged");
  return join_status(parts);
}

std::string form_description(const Signature& sig) {
  if (sig.n_zero == 0 && sig.n_minus == 0 && sig.n_plus > 0) return "positive-definite";
  if (sig.n_zero == 0 && sig.n_plus == 0 && sig.n_minus > 0) return "negative-definite";
  return "signature(+" + std::to_string(sig.n_plus) + ",-" + std::to_string(sig.n_minus) +
         ",0:" + std::to_string(sig.n_zero) + ")";
}

// One row per grid node plus one per crossing, ascending in the parameter.
std::string scan_csv(const HillProblem& problem, Axis axis, double fixed, double lo,
                     double hi, const ScanSettings& settings, const char* location_column) {
  ScanCache cache;
  std::vector<CrossingRecord> records =
      axis == Axis::lambda ? find_crossings_lambda(problem, fixed, lo, hi, settings, &cache)
                           : find_crossings_s(problem, fixed, lo, hi, settings, &cache);
  const std::vector<Matrix>& props =
      cache.grid_propagators(problem, axis, fixed, lo, hi, settings.grid);
  Matrix rotation = problem.boundary_rotation_matrix();

  struct Row {
    double location;
    int is_crossing;
    double indicator;
    int multiplicity;
    std::string form_values;
    std::string status;
  };
  std::vector<Row> rows;
  rows.reserve(props.size() + records.size());
  double h = (hi - lo) / settings.grid;
  for (int i = 0; i <= settings.grid; ++i) {
    double t = i == settings.grid ? hi : lo + i * h;
    double indicator =
        jacobi_svd(realify(props[static_cast<std::size_t>(i)]) - rotation)
            .singular_values.back();
    rows.push_back({t, 0, indicator, 0, "", "ok"});
  }
  for (const CrossingRecord& record : records) {
    double t = record.location();
    double indicator = axis == Axis::lambda ? crossing_indicator(problem, t, fixed)
                                            : crossing_indicator(problem, fixed, t);
    rows.push_back({t, 1, indicator, record.normalized_multiplicity, gram_values(record),
                    crossing_status(record)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.location != b.location) return a.location < b.location;
    return a.is_crossing < b.is_crossing;
  });

  std::ostringstream out;
  out << location_column << ",indicator,is_crossing,multiplicity,form_values,status\n";
  for (const Row& row : rows)
    out << csv_num(row.location) << ',' << csv_num(row.indicator) << ',' << row.is_crossing
        << ',' << row.multiplicity << ',' << row.form_values << ',' << row.status << '\n';
  return out.str();
}

}  // namespace

namespace {

void require_grid(const RunConfig& config) {
  if (config.scan.grid < 1) throw ConfigError("scan grid must be positive");
}

}  // namespace

std::string run_scan_lambda_csv(const RunConfig& config) {
  require_grid(config);
  HillProblem problem = make_problem(config);
  return scan_csv(problem, Axis::lambda, problem.half_period(), 0.0, problem.lambda_max(),
                  config.scan, "lambda");
}

std::string run_scan_s_csv(const RunConfig& config) {
  require_grid(config);
  HillProblem problem = make_problem(config);
  bool interior = problem.theta() > 0.0 && problem.theta() < 2.0 * kPi;
  double lo = 0.0;
  if (problem.s_min_explicit() || interior) {
    lo = problem.s_min();
  } else {
    ReportOptions options;
    options.scan = config.scan;
    std::vector<std::string> flags;
    lo = stabilized_bottom_height(problem, options, flags);
    if (!flags.empty()) throw NumericalError("scan-s: " + flags.front());
  }
  return scan_csv(problem, Axis::s, config.lambda, lo, problem.half_period(), config.scan,
                  "s");
}

SweepCsvs run_sweep_theta_csv(const RunConfig& config) {
  require_grid(config);
  if (config.theta_points < 2) throw ConfigError("theta_points must be at least 2");
  HillProblem problem = make_problem(config);
  int points = config.theta_points;
  std::vector<double> thetas;
  thetas.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    thetas.push_back(i == points - 1 ? 2.0 * kPi
                                     : 2.0 * kPi * (static_cast<double>(i) / (points - 1)));
  ReportOptions options;
  options.scan = config.scan;
  options.s0 = config.s0;
  std::vector<SweepRow> rows = sweep_theta(problem, thetas, options);

  std::ostringstream eigs, conj, form;
  eigs << "theta,branch,lambda,status\n";
  conj << "theta,branch,s,status\n";
  form << "theta,branch,s,form_value,status\n";
  bool all_ok = true;
  for (const SweepRow& row : rows) {
    std::vector<std::string> parts = row.flags;
    if (!row.identities_pass) parts.insert(parts.begin(), "identities-failed");
    std::string status = join_status(parts);
    if (status != "ok") all_ok = false;
    std::string theta = csv_num(row.theta);
    for (std::size_t b = 0; b < row.eigenvalues.size(); ++b)
      eigs << theta << ',' << b << ',' << csv_num(row.eigenvalues[b]) << ',' << status
           << '\n';
    for (std::size_t b = 0; b < row.conjugate_points.size(); ++b)
      conj << theta << ',' << b << ',' << csv_num(row.conjugate_points[b]) << ',' << status
           << '\n';
    for (std::size_t b = 0; b < row.conjugate_form_values.size(); ++b)
      form << theta << ',' << b << ',' << csv_num(row.conjugate_points[b]) << ','
           << csv_num(row.conjugate_form_values[b]) << ',' << status << '\n';
  }
  return {eigs.str(), conj.str(), form.str(), all_ok};
}

VerifyOutput run_verify(const RunConfig& config) {
  require_grid(config);
  HillProblem problem = make_problem(config);
  ReportOptions options;
  options.scan = config.scan;
  options.s0 = config.s0;
  MaslovReport report = full_report(problem, options);

  std::ostringstream text;
  text << "problem: preset=" << config.preset << " dimension=" << problem.dim()
       << " theta=" << csv_num(report.theta)
       << " half_period=" << csv_num(problem.half_period())
       << " lambda_max=" << csv_num(report.lambda_max) << " s0=" << csv_num(report.s0)
       << "\n";
  for (Edge which : {Edge::bottom, Edge::right, Edge::top, Edge::left}) {
    const CurveSummary& edge = report.edge(which);
    text << "edge " << edge_name(which) << ": crossings=" << edge.crossings.size()
         << " index=" << csv_num(edge.index) << " count=" << csv_num(edge.count)
         << (edge.regular ? "" : " (irregular)") << "\n";
    for (const CrossingRecord& record : edge.crossings)
      text << "  at " << (record.axis == Axis::lambda ? "lambda=" : "s=")
           << csv_num(record.location()) << " multiplicity=" << record.normalized_multiplicity
           << " form=" << form_description(record.signature) << "\n";
  }
  if (report.morse >= 0)
    text << "morse_index: " << report.morse << "\n";
  else
    text << "morse_index: unavailable\n";
  if (report.morse_v0) text << "morse_index_v0: " << *report.morse_v0 << "\n";
  for (const IdentityCheck& check : report.identities) {
    if (!check.applicable) {
      text << "identity " << check.name << ": SKIP (not applicable)\n";
    } else {
      text << "identity " << check.name << ": " << (check.passed ? "PASS" : "FAIL")
           << " lhs=" << csv_num(check.lhs) << " rhs=" << csv_num(check.rhs) << "\n";
    }
  }
  for (const std::string& note : report.notes) text << "note: " << note << "\n";
  for (const std::string& flag : report.flags) text << "flag: " << flag << "\n";
  bool passed = report.all_passed();
  text << "result: " << (passed ? "PASS" : "FAIL") << "\n";

  std::ostringstream table;
  table << "identity,lhs,rhs,residual,applicable,passed\n";
  for (const IdentityCheck& check : report.identities)
    table << check.name << ',' << csv_num(check.lhs) << ',' << csv_num(check.rhs) << ','
          << csv_num(check.residual()) << ',' << (check.applicable ? 1 : 0) << ','
          << (check.passed ? 1 : 0) << '\n';

  return {text.str(), table.str(), passed};
}

}  // namespace hillmaslov
