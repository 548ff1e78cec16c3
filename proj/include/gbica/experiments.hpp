#pragma once

// Experiment harness producing CSV reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gbica {

struct ExperimentParams {
  std::optional<int> d;
  std::optional<uint64_t> n;
  std::optional<int> B;
  std::optional<int> k;
  std::optional<int> iters;
  std::optional<int> trials;
  std::optional<double> s;
  std::optional<std::string> family;  // lattice: "cubic" or "checkerboard"
  uint64_t seed = 1;
};

struct ExperimentReport {
  std::string id;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Ids: classic-zipf, universal-blocks, adaptive, ecvq, lattice, linear-compare.
ExperimentReport run_experiment(const std::string& id, const ExperimentParams& params);
std::vector<std::string> experiment_ids();

/// Header row then one line per row; parameters go to leading '#' comment lines.
void write_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace gbica
