#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "hillmaslov/commands.hpp"
#include "hillmaslov/errors.hpp"

namespace {

// Flag values captured per subcommand; only flags the user actually passed
// override the config file (and the config file overrides the defaults).
struct Overrides {
  std::string config_path;
  std::string preset;
  std::string out;
  double theta = 0.0;
  double lambda_max = 0.0;
  double s0 = 0.0;
  double lambda = 0.0;
  int grid = 0;
  int theta_points = 0;
};

void add_common(CLI::App* sub, Overrides& o, bool with_theta) {
  sub->add_option("--config", o.config_path, "configuration file to start from");
  sub->add_option("--preset", o.preset,
                  "potential preset: mathieu, free, constant:<list>, matrix");
  if (with_theta) sub->add_option("--theta", o.theta, "twist angle, reduced modulo 2 pi");
  sub->add_option("--lambda-max", o.lambda_max, "spectral ceiling of the scan rectangle");
  sub->add_option("--s0", o.s0, "bottom-edge interval height override");
  sub->add_option("--grid", o.grid, "top-level scan grid cells")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "output file, or file prefix for sweep-theta");
}

bool given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* option = sub->get_option_no_throw(name);
  return option != nullptr && option->count() > 0;
}

hillmaslov::RunConfig resolve(const CLI::App* sub, const Overrides& o,
                              const char* command) {
  hillmaslov::RunConfig config;
  if (given(sub, "--config")) config = hillmaslov::load_config(o.config_path);
  config.command = command;
  if (given(sub, "--preset")) config.preset = o.preset;
  if (given(sub, "--theta")) config.theta = o.theta;
  if (given(sub, "--lambda-max")) config.lambda_max = o.lambda_max;
  if (given(sub, "--s0")) config.s0 = o.s0;
  if (given(sub, "--grid")) config.scan.grid = o.grid;
  if (given(sub, "--out")) config.out = o.out;
  if (given(sub, "--lambda")) config.lambda = o.lambda;
  if (given(sub, "--theta-points")) config.theta_points = o.theta_points;
  return config;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hillmaslov::ConfigError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw hillmaslov::ConfigError("short write to '" + path + "'");
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
    std::cerr << "wrote " << path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "counts unstable eigenvalues of twisted-boundary Hill problems two ways:\n"
      "spectral-parameter scans and signed conjugate-point scans"};
  app.require_subcommand(1);

  Overrides scan_lambda_opts, scan_s_opts, sweep_opts, verify_opts;
  CLI::App* scan_lambda = app.add_subcommand(
      "scan-lambda", "scan the spectral parameter at the full half-period");
  add_common(scan_lambda, scan_lambda_opts, true);

  CLI::App* scan_s = app.add_subcommand(
      "scan-s", "scan the interval half-length at fixed spectral parameter");
  add_common(scan_s, scan_s_opts, true);
  scan_s->add_option("--lambda", scan_s_opts.lambda,
                     "fixed spectral parameter (default 0)");

  CLI::App* sweep = app.add_subcommand(
      "sweep-theta", "sweep the twist angle over [0, 2 pi] and tabulate branches");
  add_common(sweep, sweep_opts, false);
  sweep->add_option("--theta-points", sweep_opts.theta_points,
                    "twist grid size (default 201)")
      ->check(CLI::Range(2, 1000000));

  CLI::App* verify = app.add_subcommand(
      "verify", "scan all four rectangle edges and check the index identities");
  add_common(verify, verify_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (scan_lambda->parsed()) {
      hillmaslov::RunConfig config = resolve(scan_lambda, scan_lambda_opts, "scan-lambda");
      emit(config.out, hillmaslov::run_scan_lambda_csv(config));
      return 0;
    }
    if (scan_s->parsed()) {
      hillmaslov::RunConfig config = resolve(scan_s, scan_s_opts, "scan-s");
      emit(config.out, hillmaslov::run_scan_s_csv(config));
      return 0;
    }
    if (sweep->parsed()) {
      hillmaslov::RunConfig config = resolve(sweep, sweep_opts, "sweep-theta");
      hillmaslov::SweepCsvs tables = hillmaslov::run_sweep_theta_csv(config);
      std::string prefix = config.out.empty() ? "sweep" : config.out;
      write_file(prefix + "_eigenvalues.csv", tables.eigenvalues);
      write_file(prefix + "_conjugate_points.csv", tables.conjugate_points);
      write_file(prefix + "_form_values.csv", tables.form_values);
      std::cerr << "wrote " << prefix << "_{eigenvalues,conjugate_points,form_values}.csv\n";
      if (!tables.all_ok) std::cerr << "sweep rows carry flags or failed identities\n";
      return tables.all_ok ? 0 : 1;
    }
    hillmaslov::RunConfig config = resolve(verify, verify_opts, "verify");
    hillmaslov::VerifyOutput result = hillmaslov::run_verify(config);
    std::cout << result.text;
    if (config.out.empty()) {
      std::cout << "\n" << result.table;
    } else {
      write_file(config.out, result.table);
      std::cerr << "wrote " << config.out << "\n";
    }
    return result.passed ? 0 : 1;
  } catch (const hillmaslov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hillmaslov::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
