#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fellq {

// Tabular record emitted by sweeps: named columns of equal length plus
// ordered metadata (model, parameters, grid, seed, tool version).
struct ScanReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void set_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  int column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

}  // namespace fellq
