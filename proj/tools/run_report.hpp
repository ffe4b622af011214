#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdkit/engine.hpp"
#include "sdkit/ensemble.hpp"

namespace sdkit::cli {

struct ClassAccuracy {
  ClassLabel cls = 1;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t undecided = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

/// Summary printed after train and evaluate.
struct RunReport {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::size_t ensemble_size = 0;
  /// models_per_stratum[i - 1][c]: models capturing exactly c points of class i.
  std::vector<std::vector<std::size_t>> models_per_stratum;
  SymmetryReport symmetry;
  std::optional<TrainReport> training;
  std::vector<ClassAccuracy> accuracy;
  std::size_t eval_size = 0;
  std::size_t undecided = 0;
  double wall_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Fills the ensemble summary fields.
void summarize(RunReport& report, const Ensemble& ens);

/// Classifies every labeled point of `ds` and fills the accuracy fields.
void score(RunReport& report, const Ensemble& ens, const LabeledDataset& ds, const ClassifyOptions& options);

}  // namespace sdkit::cli
