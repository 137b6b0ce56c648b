#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fmpo {

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

// Outcome of one CLI command. Everything except wall_seconds is a function
// of the inputs and the seed.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;   // (name, sha256)
  std::vector<std::pair<std::string, std::string>> results;  // (name, value)
  std::vector<ResidualEntry> residuals;
  std::vector<std::string> warnings;
  bool pass = true;
  int exit_code = 0;
  std::string error;
  double wall_seconds = 0.0;

  void add_input_file(const std::string& path);
  void add_input_value(const std::string& name, const std::string& value);
  void add_result(const std::string& name, const std::string& value);
  // Records the residual and fails the report when value > tolerance.
  bool add_residual(const std::string& name, double value, double tolerance);
  // Sets exit_code from pass unless an error was recorded.
  void finish();

  std::string to_json() const;
  std::string to_text() const;
};

std::string sha256_hex(const std::string& bytes);

// Empty when the JSON document has every required report field with the
// right type; otherwise one message per problem.
std::vector<std::string> validate_report_json(const std::string& text);

}  // namespace fmpo
