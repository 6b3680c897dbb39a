#include "hillmaslov/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillmaslov/errors.hpp"
#include "hillmaslov/matrix.hpp"

namespace hillmaslov {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Shortest representation that parses back to the same double.
std::string format_number(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

double parse_real(const std::string& value, int line, const std::string& key) {
  std::string body = value;
  if (!body.empty() && body.front() == '+') body.erase(body.begin());
  double out = 0.0;
  const char* first = body.c_str();
  const char* last = first + body.size();
  auto result = std::from_chars(first, last, out);
  if (result.ec != std::errc{} || result.ptr != last || !std::isfinite(out))
    fail(line, "key '" + key + "' needs a finite real number, got '" + value + "'");
  return out;
}

int parse_integer(const std::string& value, int line, const std::string& key) {
  std::string body = value;
  if (!body.empty() && body.front() == '+') body.erase(body.begin());
  int out = 0;
  const char* first = body.c_str();
  const char* last = first + body.size();
  auto result = std::from_chars(first, last, out);
  if (result.ec != std::errc{} || result.ptr != last)
    fail(line, "key '" + key + "' needs an integer, got '" + value + "'");
  return out;
}

int parse_positive(const std::string& value, int line, const std::string& key, int least) {
  int out = parse_integer(value, line, key);
  if (out < least)
    fail(line, "key '" + key + "' must be at least " + std::to_string(least));
  return out;
}

std::vector<double> parse_real_list(const std::string& value, int line,
                                    const std::string& key) {
  std::vector<double> out;
  std::string::size_type start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    std::string item = trim(comma == std::string::npos ? value.substr(start)
                                                       : value.substr(start, comma - start));
    if (item.empty()) fail(line, "key '" + key + "' has an empty list entry");
    out.push_back(parse_real(item, line, key));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void assign_global(RunConfig& config, const std::string& key, const std::string& value,
                   int line) {
  if (key == "command") {
    if (value != "scan-lambda" && value != "scan-s" && value != "sweep-theta" &&
        value != "verify")
      fail(line, "unknown command '" + value + "'");
    config.command = value;
    return;
  }
  fail(line, "key '" + key + "' must appear inside a section");
}

void assign_problem(RunConfig& config, const std::string& key, const std::string& value,
                    int line) {
  if (key == "preset") {
    config.preset = value;
  } else if (key == "theta") {
    config.theta = parse_real(value, line, key);
  } else if (key == "lambda_max") {
    config.lambda_max = parse_real(value, line, key);
  } else if (key == "s0") {
    config.s0 = parse_real(value, line, key);
  } else if (key == "half_period") {
    config.half_period = parse_real(value, line, key);
  } else if (key == "dimension") {
    config.dimension = parse_positive(value, line, key, 1);
  } else if (key == "potential_matrix") {
    config.potential_matrix = parse_real_list(value, line, key);
  } else {
    fail(line, "unknown key '" + key + "' in [problem]");
  }
}

void assign_integrator(RunConfig& config, const std::string& key, const std::string& value,
                       int line) {
  if (key == "steps_per_period") {
    config.integrator.steps_per_period = parse_positive(value, line, key, 2);
  } else if (key == "check_tol") {
    config.integrator.check_tol = parse_real(value, line, key);
  } else {
    fail(line, "unknown key '" + key + "' in [integrator]");
  }
}

void assign_scan(RunConfig& config, const std::string& key, const std::string& value,
                 int line) {
  if (key == "grid") {
    config.scan.grid = parse_positive(value, line, key, 1);
  } else if (key == "refine_tol") {
    config.scan.refine_tol = parse_real(value, line, key);
  } else if (key == "indicator_threshold") {
    config.scan.indicator_threshold = parse_real(value, line, key);
  } else if (key == "kernel_tol") {
    config.scan.kernel_tol = parse_real(value, line, key);
  } else if (key == "endpoint_tol") {
    config.scan.endpoint_tol = parse_real(value, line, key);
  } else if (key == "max_subdivide_depth") {
    config.scan.max_subdivide_depth = parse_positive(value, line, key, 0);
  } else if (key == "subdivide_grid") {
    config.scan.subdivide_grid = parse_positive(value, line, key, 2);
  } else if (key == "form_rank_tol") {
    config.scan.form_rank_tol = parse_real(value, line, key);
  } else if (key == "lambda") {
    config.lambda = parse_real(value, line, key);
  } else if (key == "theta_points") {
    config.theta_points = parse_positive(value, line, key, 2);
  } else {
    fail(line, "unknown key '" + key + "' in [scan]");
  }
}

void assign_output(RunConfig& config, const std::string& key, const std::string& value,
                   int line) {
  if (key == "path") {
    config.out = value;
  } else {
    fail(line, "unknown key '" + key + "' in [output]");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::istringstream stream(text);
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "integrator" && section != "scan" &&
          section != "output")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key before '='");
    if (!seen.insert(section + "/" + key).second)
      fail(line_no, "duplicate key '" + key + "'");
    if (section.empty()) {
      assign_global(config, key, value, line_no);
    } else if (section == "problem") {
      assign_problem(config, key, value, line_no);
    } else if (section == "integrator") {
      assign_integrator(config, key, value, line_no);
    } else if (section == "scan") {
      assign_scan(config, key, value, line_no);
    } else {
      assign_output(config, key, value, line_no);
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  if (!config.command.empty()) out << "command = " << config.command << "\n\n";

  out << "[problem]\n";
  out << "preset = " << config.preset << "\n";
  out << "theta = " << format_number(config.theta) << "\n";
  if (config.lambda_max) out << "lambda_max = " << format_number(*config.lambda_max) << "\n";
  if (config.s0) out << "s0 = " << format_number(*config.s0) << "\n";
  if (config.half_period)
    out << "half_period = " << format_number(*config.half_period) << "\n";
  if (config.dimension > 0) out << "dimension = " << config.dimension << "\n";
  if (!config.potential_matrix.empty()) {
    out << "potential_matrix = ";
    for (std::size_t i = 0; i < config.potential_matrix.size(); ++i) {
      if (i > 0) out << ", ";
      out << format_number(config.potential_matrix[i]);
    }
    out << "\n";
  }

  out << "\n[integrator]\n";
  out << "steps_per_period = " << config.integrator.steps_per_period << "\n";
  out << "check_tol = " << format_number(config.integrator.check_tol) << "\n";

  out << "\n[scan]\n";
  out << "grid = " << config.scan.grid << "\n";
  out << "refine_tol = " << format_number(config.scan.refine_tol) << "\n";
  out << "indicator_threshold = " << format_number(config.scan.indicator_threshold) << "\n";
  out << "kernel_tol = " << format_number(config.scan.kernel_tol) << "\n";
  out << "endpoint_tol = " << format_number(config.scan.endpoint_tol) << "\n";
  out << "max_subdivide_depth = " << config.scan.max_subdivide_depth << "\n";
  out << "subdivide_grid = " << config.scan.subdivide_grid << "\n";
  out << "form_rank_tol = " << format_number(config.scan.form_rank_tol) << "\n";
  out << "lambda = " << format_number(config.lambda) << "\n";
  out << "theta_points = " << config.theta_points << "\n";

  if (!config.out.empty()) {
    out << "\n[output]\n";
    out << "path = " << config.out << "\n";
  }
  return out.str();
}

PotentialSpec config_potential(const RunConfig& config) {
  const std::string& preset = config.preset;
  double half_period = config.half_period.value_or(kPi);
  try {
    if (preset == "mathieu") return PotentialSpec::mathieu(3.2, 2.0, half_period);
    if (preset == "free") return PotentialSpec::constant(Matrix(1, 1), half_period);
    if (preset.rfind("constant:", 0) == 0) {
      std::vector<double> entries;
      try {
        entries = parse_real_list(preset.substr(9), 0, "preset");
      } catch (const ConfigError&) {
        throw ConfigError("preset '" + preset +
                          "' needs a comma-separated list of diagonal entries");
      }
      return PotentialSpec::constant(Matrix::diagonal(entries), half_period);
    }
    if (preset == "matrix") {
      int n = config.dimension;
      if (n < 1)
        throw ConfigError("preset 'matrix' needs a positive [problem] dimension");
      if (config.potential_matrix.size() != static_cast<std::size_t>(n) * n)
        throw ConfigError("potential_matrix needs dimension^2 = " + std::to_string(n * n) +
                          " entries, got " + std::to_string(config.potential_matrix.size()));
      Matrix v0(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v0(i, j) = config.potential_matrix[i * n + j];
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (v0(i, j) != v0(j, i))
            throw ConfigError("potential_matrix must be symmetric (entries " +
                              std::to_string(i) + "," + std::to_string(j) + " differ)");
      return PotentialSpec::constant(std::move(v0), half_period);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid preset '" + preset + "': " + e.what());
  }
  throw ConfigError("unknown preset '" + preset +
                    "' (expected mathieu, free, constant:<list>, or matrix)");
}

HillProblem make_problem(const RunConfig& config) {
  PotentialSpec potential = config_potential(config);
  double theta = config.theta;
  if (theta < 0.0 || theta > 2.0 * kPi) {
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
  }
  HillProblem::Options options;
  options.lambda_max = config.lambda_max;
  options.s_min = config.s0;
  options.integrator = config.integrator;
  try {
    return HillProblem(potential, theta, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid problem configuration: ") + e.what());
  }
}

}  // namespace hillmaslov
