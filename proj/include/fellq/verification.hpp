#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fellq/models.hpp"

namespace fellq {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return residual <= tolerance; }
};

struct CheckOptions {
  int triples = 20;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> hbars = {0.0, 0.1, 1.0 / 3.0, 0.7};
};

// Runs the full invariant suite for one model: deformed bundle axioms on
// seeded band-limited triples, action compatibilities, spectral projection
// properties, calculus laws, and the model's closed-form identities.
std::vector<CheckResult> run_model_checks(const ModelSpec& model, const CheckOptions& opts);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace fellq
