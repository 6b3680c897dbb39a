#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "hillmaslov/commands.hpp"
#include "hillmaslov/errors.hpp"
#include "hillmaslov/run_config.hpp"

using hillmaslov::ConfigError;
using hillmaslov::RunConfig;

namespace {

constexpr double kPi = 3.14159265358979323846;

// oracle locations for the cosine potential (independent high-order solver)
constexpr double kEig01A = 0.8623455065526502;
constexpr double kEig01B = 1.0458341625116563;
constexpr double kConj01A = 0.027958134087768316;
constexpr double kConj01B = 2.9262884646108347;
constexpr double kEig0A = 0.8622136633024249;
constexpr double kEig0B = 1.045935187136303;
constexpr double kConj0 = 2.9263101741404736;
constexpr double kEigHalfA = 0.8924116994512434;
constexpr double kEigHalfB = 1.0218640803507593;
constexpr double kConjHalfA = 0.4739095591522855;
constexpr double kConjHalfB = 2.9219562459014448;
constexpr double kEigPi = 0.9601600985815664;
constexpr double kConjPiA = 0.9968025200415493;
constexpr double kConjPiB = 2.917584428698543;

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double field_number(const std::string& field) { return std::strtod(field.c_str(), nullptr); }

RunConfig fast_mathieu(double theta) {
  RunConfig config;
  config.preset = "mathieu";
  config.theta = theta;
  config.scan.grid = 400;
  return config;
}

}  // namespace

TEST_CASE("lambda scan emits grid rows and refined crossings") {
  RunConfig config = fast_mathieu(0.1);
  std::string csv = hillmaslov::run_scan_lambda_csv(config);
  CHECK(csv.find("nan") == std::string::npos);
  CHECK(csv.find("inf") == std::string::npos);

  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 1 + 401 + 2);
  CHECK(lines[0] == "lambda,indicator,is_crossing,multiplicity,form_values,status");

  double previous = -1.0;
  std::vector<std::vector<std::string>> crossings;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_fields(lines[i]);
    REQUIRE(fields.size() == 6);
    double location = field_number(fields[0]);
    CHECK(location >= previous);
    previous = location;
    if (fields[2] == "1") {
      crossings.push_back(fields);
    } else {
      CHECK(fields[2] == "0");
      CHECK(fields[3] == "0");
      CHECK(fields[4].empty());
      CHECK(fields[5] == "ok");
      CHECK(field_number(fields[1]) > 0.0);
    }
  }
  REQUIRE(crossings.size() == 2);
  CHECK(std::abs(field_number(crossings[0][0]) - kEig01A) < 5e-6);
  CHECK(std::abs(field_number(crossings[1][0]) - kEig01B) < 5e-6);
  for (const auto& fields : crossings) {
    CHECK(field_number(fields[1]) < 1e-6);  // indicator vanishes at a crossing
    CHECK(fields[3] == "1");
    CHECK(field_number(fields[4]) < 0.0);  // spectral crossing forms are negative
    CHECK(fields[5] == "ok");
  }

  CHECK(hillmaslov::run_scan_lambda_csv(config) == csv);  // byte-identical rerun
}

TEST_CASE("interval scan lists conjugate points above the spectral floor") {
  RunConfig config = fast_mathieu(0.1);
  std::string csv = hillmaslov::run_scan_s_csv(config);
  std::vector<std::string> lines = split_lines(csv);
  CHECK(lines[0] == "s,indicator,is_crossing,multiplicity,form_values,status");

  std::vector<std::vector<std::string>> crossings;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_fields(lines[i]);
    REQUIRE(fields.size() == 6);
    if (fields[2] == "1") crossings.push_back(fields);
  }
  REQUIRE(crossings.size() == 2);
  CHECK(std::abs(field_number(crossings[0][0]) - kConj01A) < 5e-6);
  CHECK(std::abs(field_number(crossings[1][0]) - kConj01B) < 5e-6);
  for (const auto& fields : crossings) {
    CHECK(fields[3] == "1");
    CHECK(field_number(fields[4]) > 0.0);  // interval crossing forms are positive
  }
}

TEST_CASE("interval scan at zero twist starts at the stabilized height") {
  RunConfig config = fast_mathieu(0.0);
  std::string csv = hillmaslov::run_scan_s_csv(config);
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() > 2);
  CHECK(std::abs(field_number(split_fields(lines[1])[0]) - kPi / 8.0) < 1e-9);

  std::vector<std::vector<std::string>> crossings;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_fields(lines[i]);
    if (fields[2] == "1") crossings.push_back(fields);
  }
  REQUIRE(crossings.size() == 1);
  CHECK(std::abs(field_number(crossings[0][0]) - kConj0) < 1e-4);
  CHECK(crossings[0][3] == "1");
  CHECK(field_number(crossings[0][4]) > 0.0);

  // explicit height override takes precedence over the search
  config.s0 = 0.5;
  std::string shifted = hillmaslov::run_scan_s_csv(config);
  std::vector<std::string> shifted_lines = split_lines(shifted);
  CHECK(field_number(split_fields(shifted_lines[1])[0]) == 0.5);
}

TEST_CASE("twist sweep tabulates eigenvalue and conjugate point branches") {
  RunConfig config = fast_mathieu(0.0);
  config.theta_points = 5;  // 0, pi/2, pi, 3 pi/2, 2 pi
  hillmaslov::SweepCsvs tables = hillmaslov::run_sweep_theta_csv(config);
  CHECK(tables.all_ok);

  std::vector<std::string> eigs = split_lines(tables.eigenvalues);
  std::vector<std::string> conj = split_lines(tables.conjugate_points);
  std::vector<std::string> form = split_lines(tables.form_values);
  CHECK(eigs[0] == "theta,branch,lambda,status");
  CHECK(conj[0] == "theta,branch,s,status");
  CHECK(form[0] == "theta,branch,s,form_value,status");
  // eigenvalue branches: two per twist, except the double touch at pi
  REQUIRE(eigs.size() == 1 + 2 + 2 + 1 + 2 + 2);
  // conjugate points: one at twists 0 / 2 pi, two at interior twists
  REQUIRE(conj.size() == 1 + 1 + 2 + 2 + 2 + 1);
  REQUIRE(form.size() == conj.size());

  auto rows_at = [](const std::vector<std::string>& lines, double theta) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      std::vector<std::string> fields = split_fields(lines[i]);
      if (std::abs(field_number(fields[0]) - theta) < 1e-9) out.push_back(fields);
    }
    return out;
  };

  auto zero_rows = rows_at(eigs, 0.0);
  REQUIRE(zero_rows.size() == 2);
  CHECK(std::abs(field_number(zero_rows[0][2]) - kEig0A) < 1e-5);
  CHECK(std::abs(field_number(zero_rows[1][2]) - kEig0B) < 1e-5);

  auto half_rows = rows_at(eigs, kPi / 2.0);
  REQUIRE(half_rows.size() == 2);
  CHECK(std::abs(field_number(half_rows[0][2]) - kEigHalfA) < 1e-5);
  CHECK(std::abs(field_number(half_rows[1][2]) - kEigHalfB) < 1e-5);

  auto pi_rows = rows_at(eigs, kPi);
  REQUIRE(pi_rows.size() == 1);
  CHECK(std::abs(field_number(pi_rows[0][2]) - kEigPi) < 1e-4);

  auto half_conj = rows_at(conj, kPi / 2.0);
  REQUIRE(half_conj.size() == 2);
  CHECK(std::abs(field_number(half_conj[0][2]) - kConjHalfA) < 1e-6);
  CHECK(std::abs(field_number(half_conj[1][2]) - kConjHalfB) < 1e-6);

  auto pi_conj = rows_at(conj, kPi);
  REQUIRE(pi_conj.size() == 2);
  CHECK(std::abs(field_number(pi_conj[0][2]) - kConjPiA) < 1e-6);
  CHECK(std::abs(field_number(pi_conj[1][2]) - kConjPiB) < 1e-6);

  // reflection symmetry of the twist
  auto reflected = rows_at(conj, 3.0 * kPi / 2.0);
  REQUIRE(reflected.size() == 2);
  CHECK(std::abs(field_number(reflected[0][2]) - field_number(half_conj[0][2])) < 1e-7);
  CHECK(std::abs(field_number(reflected[1][2]) - field_number(half_conj[1][2])) < 1e-7);

  auto boundary_conj = rows_at(conj, 0.0);
  REQUIRE(boundary_conj.size() == 1);
  CHECK(std::abs(field_number(boundary_conj[0][2]) - kConj0) < 1e-4);

  for (std::size_t i = 1; i < form.size(); ++i) {
    std::vector<std::string> fields = split_fields(form[i]);
    REQUIRE(fields.size() == 5);
    CHECK(field_number(fields[3]) > 0.0);  // interval forms stay positive
    CHECK(fields[4] == "ok");
  }
}

TEST_CASE("verify renders a passing report with the identity table") {
  RunConfig config = fast_mathieu(0.1);
  hillmaslov::VerifyOutput result = hillmaslov::run_verify(config);
  CHECK(result.passed);
  CHECK(result.text.find("result: PASS") != std::string::npos);
  CHECK(result.text.find("morse_index: 2") != std::string::npos);
  CHECK(result.text.find("edge top: crossings=2") != std::string::npos);
  CHECK(result.text.find("identity index_sum_zero: PASS") != std::string::npos);
  CHECK(result.text.find("FAIL") == std::string::npos);

  std::vector<std::string> lines = split_lines(result.table);
  REQUIRE(lines.size() == 1 + 7);
  CHECK(lines[0] == "identity,lhs,rhs,residual,applicable,passed");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_fields(lines[i]);
    REQUIRE(fields.size() == 6);
    if (fields[4] == "1") {
      CHECK(fields[5] == "1");
      CHECK(field_number(fields[3]) == 0.0);
    }
  }

  hillmaslov::VerifyOutput again = hillmaslov::run_verify(config);
  CHECK(again.text == result.text);
  CHECK(again.table == result.table);
}

TEST_CASE("verify reports an honest failure when the ceiling cuts the spectrum") {
  RunConfig config = fast_mathieu(0.1);
  config.lambda_max = 0.9;  // below the potential bound: the rectangle misses spectrum
  hillmaslov::VerifyOutput result = hillmaslov::run_verify(config);
  CHECK_FALSE(result.passed);
  CHECK(result.text.find("result: FAIL") != std::string::npos);
}

TEST_CASE("commands validate their configuration") {
  RunConfig config = fast_mathieu(0.1);
  config.scan.grid = 0;
  CHECK_THROWS_AS(hillmaslov::run_scan_lambda_csv(config), ConfigError);
  CHECK_THROWS_AS(hillmaslov::run_verify(config), ConfigError);

  config = fast_mathieu(0.1);
  config.theta_points = 1;
  CHECK_THROWS_AS(hillmaslov::run_sweep_theta_csv(config), ConfigError);

  config = fast_mathieu(0.1);
  config.preset = "warped";
  CHECK_THROWS_AS(hillmaslov::run_scan_lambda_csv(config), ConfigError);
}
