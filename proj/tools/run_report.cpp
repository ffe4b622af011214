#include "run_report.hpp"

namespace sdkit::cli {

void summarize(RunReport& report, const Ensemble& ens) {
  report.ensemble_size = ens.size();
  report.models_per_stratum.clear();
  for (std::size_t size : ens.class_sizes()) report.models_per_stratum.emplace_back(size + 1, 0);
  for (const EnsembleEntry& e : ens.entries()) {
    for (std::size_t i = 0; i < report.models_per_stratum.size(); ++i) {
      ++report.models_per_stratum[i][e.rating.captured(static_cast<ClassLabel>(i + 1))];
    }
  }
  report.symmetry = ens.symmetry();
}

void score(RunReport& report, const Ensemble& ens, const LabeledDataset& ds, const ClassifyOptions& options) {
  report.accuracy.assign(static_cast<std::size_t>(ens.n_classes()), ClassAccuracy{});
  for (std::size_t i = 0; i < report.accuracy.size(); ++i) report.accuracy[i].cls = static_cast<ClassLabel>(i + 1);
  report.eval_size = 0;
  report.undecided = 0;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const ClassLabel truth = ds.labels()[k];
    if (truth < 1 || truth > ens.n_classes()) continue;
    ClassAccuracy& acc = report.accuracy[static_cast<std::size_t>(truth - 1)];
    ++report.eval_size;
    ++acc.total;
    const Decision d = ens.classify(ds.points()[k], options);
    if (!d) {
      ++report.undecided;
      ++acc.undecided;
    } else if (*d == truth) {
      ++acc.correct;
    }
  }
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);

  nlohmann::ordered_json ens;
  ens["size"] = ensemble_size;
  nlohmann::ordered_json strata = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < models_per_stratum.size(); ++i) {
    strata["class_" + std::to_string(i + 1)] = models_per_stratum[i];
  }
  ens["models_per_stratum"] = strata;
  nlohmann::ordered_json sym;
  std::size_t balanced_groups = 0;
  for (const PermutationGroup& g : symmetry.groups) balanced_groups += g.balanced ? 1 : 0;
  sym["balanced"] = symmetry.balanced();
  sym["groups"] = symmetry.groups.size();
  sym["balanced_groups"] = balanced_groups;
  sym["uncovering_models"] = symmetry.uncovering_models;
  ens["symmetry"] = sym;
  j["ensemble"] = ens;

  if (training) {
    nlohmann::ordered_json t;
    t["target_size"] = training->target_size;
    t["accepted"] = training->accepted;
    t["draws"] = training->draws;
    t["budget"] = training->budget;
    t["partial"] = training->exhausted;
    t["source_exhausted"] = training->source_exhausted;
    if (!training->message.empty()) t["warning"] = training->message;
    j["training"] = t;
  }

  nlohmann::ordered_json eval;
  eval["size"] = eval_size;
  eval["undecided"] = undecided;
  eval["decided"] = eval_size - undecided;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const ClassAccuracy& a : accuracy) {
    per_class.push_back({{"class", a.cls}, {"total", a.total}, {"correct", a.correct},
                         {"undecided", a.undecided}, {"accuracy", a.accuracy()}});
  }
  eval["per_class"] = per_class;
  j["evaluation"] = eval;
  j["wall_seconds"] = wall_seconds;
  return j;
}

}  // namespace sdkit::cli
