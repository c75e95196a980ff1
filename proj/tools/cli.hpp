#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fellq/models.hpp"
#include "fellq/report.hpp"

namespace fellq::cli {

// Options shared by every subcommand; mirrors the flag names.  Config files
// use the same keys in `key = value` lines; flags override file values.
struct RunConfig {
  std::string command;
  std::string model = "sphere";
  double theta = 0.3;
  int p = 3, q = 1;
  int c = 1;
  double mu = 0.11, nu = 0.23;
  std::vector<int> grid;  // empty = model default
  double hbar_min = 1e-4, hbar_max = 1e-1;
  int hbar_count = 25;
  bool log_grid = true;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  int cutoff = 8;
  int triples = 20;
  int trials = 32;
  int window = 16;
  int xi_columns = 8;
  std::string pair;  // "W,Z"
  std::string expr;  // generator-word expression
};

// Parses `key = value` lines ('#' comments and blank lines allowed); unknown
// keys are rejected with std::invalid_argument.
void apply_config_file(RunConfig& cfg, const std::string& path);

// "33x64x64" -> {33, 64, 64}
std::vector<int> parse_grid(const std::string& text);

ModelSpec model_from_config(const RunConfig& cfg);
std::vector<double> hbar_grid_from_config(const RunConfig& cfg);

// Minimal recursive-descent parser for generator words.  Atoms are generator
// names, nonnegative integer scalars, and e(x) phase literals (= e^{2pi i x});
// operators are +, -, juxtaposition (ambient product), postfix * (ambient
// star) and postfix ^d (deformed star at the model's own parameter).
// Parse errors carry a 1-based position.
struct ParseError {
  std::string message;
  int position = 0;
};
GradedElement parse_element(const std::string& text, const ModelSpec& model);

// Writes the report as CSV with '#'-prefixed metadata lines, 17 significant
// digits, atomically (temp file + rename).
void write_csv(const ScanReport& report, const std::string& path);
std::string render_csv(const ScanReport& report);

void echo_config(ScanReport& report, const RunConfig& cfg);

// Subcommand drivers; return the process exit status.
int cmd_verify(const RunConfig& cfg);
int cmd_derivative_scan(const RunConfig& cfg);
int cmd_commutator_scan(const RunConfig& cfg);
int cmd_field_scan(const RunConfig& cfg);
int cmd_spectral(const RunConfig& cfg);

}  // namespace fellq::cli
