// sdkit command-line tool: reproduce, train, classify, evaluate, inspect,
// export-fixture.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run_report.hpp"
#include "sdkit/dataset_io.hpp"
#include "sdkit/engine.hpp"
#include "sdkit/ensemble_io.hpp"
#include "sdkit/worked_example.hpp"

namespace {

using namespace sdkit;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

/// Error that maps directly onto an exit code.
struct ExitError {
  int code;
  std::string message;
};

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string echo(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    out += argv[i];
  }
  return out;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SDKIT_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || raw[0] == '-') {
    throw ExitError{kExitUsage, std::string("SDKIT_SEED is not an unsigned integer: '") + raw + "'"};
  }
  return static_cast<std::uint64_t>(v);
}

LabeledDataset load_dataset(const std::string& path, const CsvReadOptions& options) {
  try {
    return read_dataset_csv(std::filesystem::path(path), options);
  } catch (const DatasetFormatError& e) {
    std::string msg = path;
    if (e.line() > 0) msg += ":" + std::to_string(e.line());
    throw ExitError{kExitIo, msg + ": " + e.what()};
  }
}

LoadedEnsemble load_ensemble(const std::string& path) {
  try {
    return read_ensemble(std::filesystem::path(path));
  } catch (const EnsembleFormatError& e) {
    throw ExitError{kExitIo, path + ": " + e.what()};
  }
}

/// Rejects points whose dimension differs from the ensemble's regions.
void check_dimensions(const Ensemble& ens, const LabeledDataset& ds) {
  if (ds.size() == 0) return;
  const std::size_t dim = ds.dimension();
  for (const EnsembleEntry& e : ens.entries()) {
    if (e.model.is_subset()) {
      for (const Point& p : ds.points()) {
        if (!p.id()) throw ExitError{kExitUsage, "subset models need point ids"};
      }
      continue;
    }
    for (const auto& component : e.model.as_region().components) {
      for (const RegionPrimitive& r : component) {
        const auto d = dimension_of(r);
        if (d && *d != dim) {
          throw ExitError{kExitUsage, "dimension mismatch: model " + std::to_string(e.model.id()) + " is " +
                                          std::to_string(*d) + "-D, points are " + std::to_string(dim) + "-D"};
        }
      }
    }
  }
}

struct ClassifyFlags {
  double theta = 0.5;
  std::string undecided_policy = "undecided";
  std::string method = "auto";

  ClassifyOptions options() const {
    ClassifyOptions o;
    o.threshold = theta;
    o.uncovered = undecided_policy == "prior" ? UndecidedPolicy::kPrior : UndecidedPolicy::kUndecided;
    if (method == "y") o.method = ClassifyMethod::kPairwiseY;
    if (method == "w") o.method = ClassifyMethod::kArgmaxW;
    return o;
  }
};

void add_classify_flags(CLI::App* cmd, ClassifyFlags& f) {
  cmd->add_option("--theta", f.theta, "Decision threshold on Y (default 0.5)");
  cmd->add_option("--undecided-policy", f.undecided_policy, "undecided | prior")
      ->check(CLI::IsMember({"undecided", "prior"}));
  cmd->add_option("--method", f.method, "auto (Y for two classes, W otherwise) | y | w")
      ->check(CLI::IsMember({"auto", "y", "w"}));
}

// reproduce ----------------------------------------------------------------

int cmd_reproduce(const std::string& outdir, bool show_explained) {
  const example::GoldenReport report = example::verify();
  for (const example::GoldenCheck& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  for (const example::CellDiff& d : report.diffs) {
    if (d.explained && !show_explained) continue;
    std::cout << (d.explained ? "explained " : "MISMATCH ") << d.table << " row " << d.row << " column " << d.column
              << ": expected " << d.expected << ", got " << d.actual;
    if (!d.reason.empty()) std::cout << " (" << d.reason << ")";
    std::cout << '\n';
  }
  try {
    for (const auto& path : example::write_artifacts(outdir)) std::cout << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    throw ExitError{kExitIo, e.what()};
  }
  return report.passed() ? kExitOk : kExitMismatch;
}

// export-fixture -----------------------------------------------------------

int cmd_export_fixture(const std::string& outdir) {
  const std::filesystem::path dir(outdir);
  try {
    std::filesystem::create_directories(dir);
    auto write_csv = [&](const std::string& name, const LabeledDataset& ds) {
      std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
      write_dataset_csv(out, ds);
      if (!out.flush()) throw std::runtime_error("write failed: " + (dir / name).string());
      std::cout << "wrote " << (dir / name).string() << '\n';
    };
    const LabeledDataset train = example::training_set();
    write_csv("example_train.csv", train);
    write_csv("example_test.csv", example::test_set());
    auto write_sdm = [&](const std::string& name, std::vector<WeakModel> models) {
      Ensemble ens = Ensemble::for_dataset(train);
      for (WeakModel& m : models) ens.push(std::move(m), train);
      write_ensemble(dir / name, ens, {{"source", "worked example"}});
      std::cout << "wrote " << (dir / name).string() << '\n';
    };
    write_sdm("example_subsets.sdm", example::load_permutation());
    write_sdm("example_geometric.sdm", example::load_geometric_permutation());
  } catch (const std::exception& e) {
    throw ExitError{kExitIo, e.what()};
  }
  return kExitOk;
}

// train --------------------------------------------------------------------

struct TrainFlags {
  std::string data;
  std::string config;
  std::string out;
  ClassifyFlags classify;
  // Flag values keyed by config-file key, in command-line order, applied
  // after the config file.
  std::vector<std::pair<std::string, std::string>> settings;
};

int cmd_train(TrainFlags& flags, const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig cfg;
  if (const auto seed = env_seed()) cfg.generator.seed = *seed;
  try {
    if (!flags.config.empty()) {
      std::ifstream in(flags.config);
      if (!in) throw ExitError{kExitIo, "cannot open config " + flags.config};
      cfg = parse_train_config(in, cfg);
    }
    for (const auto& [key, value] : flags.settings) apply_setting(cfg, key, value);
    cfg.generator.validate();
    cfg.enrichment.validate();
    cfg.uniformity.validate();
    if (cfg.target_size == 0) throw ContractError("target-size must be at least 1");
  } catch (const ContractError& e) {
    throw ExitError{kExitUsage, e.what()};
  }

  const LabeledDataset ds = load_dataset(flags.data, {});
  TrainResult result = [&] {
    try {
      ds.require_trainable();
      return train(ds, cfg.generator, cfg.enrichment, cfg.uniformity, cfg.target_size);
    } catch (const ContractError& e) {
      throw ExitError{kExitUsage, flags.data + ": " + e.what()};
    }
  }();

  std::string kinds;
  for (RegionKind k : cfg.generator.kinds) kinds += (kinds.empty() ? "" : ",") + std::string(to_string(k));
  const EnsembleMeta meta = {{"seed", std::to_string(cfg.generator.seed)},
                             {"dataset", ds.name()},
                             {"enrichment", describe(cfg.enrichment)},
                             {"uniformity", describe(cfg.uniformity)},
                             {"trials", std::to_string(cfg.generator.trials)},
                             {"kinds", kinds},
                             {"target_size", std::to_string(cfg.target_size)}};
  try {
    write_ensemble(std::filesystem::path(flags.out), result.ensemble, meta);
  } catch (const std::exception& e) {
    throw ExitError{kExitIo, e.what()};
  }

  cli::RunReport report;
  report.command = command;
  report.seed = cfg.generator.seed;
  report.training = result.report;
  cli::summarize(report, result.ensemble);
  cli::score(report, result.ensemble, ds, flags.classify.options());
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.to_json().dump(2) << '\n';
  if (result.report.exhausted) std::cerr << "warning: " << result.report.message << '\n';
  return kExitOk;
}

// classify -----------------------------------------------------------------

int cmd_classify(const std::string& model, const std::string& points, const ClassifyFlags& flags) {
  const LoadedEnsemble loaded = load_ensemble(model);
  const Ensemble& ens = loaded.ensemble;
  CsvReadOptions options;
  options.require_label_column = false;
  options.require_labels = false;
  const LabeledDataset ds = load_dataset(points, options);
  check_dimensions(ens, ds);
  if (ds.size() == 0) return kExitOk;

  const ClassifyOptions opts = flags.options();
  const bool use_w = opts.method == ClassifyMethod::kArgmaxW ||
                     (opts.method == ClassifyMethod::kAuto && ens.n_classes() != 2);
  std::cout << "id";
  const auto pairs = all_pairs(ens.n_classes());
  if (use_w) {
    for (ClassLabel i = 1; i <= ens.n_classes(); ++i) std::cout << ",w_" << i;
  } else {
    for (const ClassPair& p : pairs) std::cout << ",y_" << p.first << '_' << p.second;
  }
  std::cout << ",decision\n";
  for (const Point& q : ds.points()) {
    const Evaluation e = ens.evaluate(q);
    std::cout << (q.id() ? std::to_string(*q.id()) : std::string());
    if (use_w) {
      for (const auto& w : e.w) std::cout << ',' << (w ? full(*w) : std::string());
    } else {
      for (const ClassPair& p : pairs) {
        std::cout << ',';
        for (const auto& [pair, y] : e.y) {
          if (pair == p) std::cout << full(y);
        }
      }
    }
    const Decision d = ens.decide(e, opts);
    std::cout << ',' << (d ? std::to_string(*d) : std::string("undecided")) << '\n';
  }
  return kExitOk;
}

// evaluate -----------------------------------------------------------------

int cmd_evaluate(const std::string& model, const std::string& data, const ClassifyFlags& flags,
                 const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  const LoadedEnsemble loaded = load_ensemble(model);
  const LabeledDataset ds = load_dataset(data, {});
  check_dimensions(loaded.ensemble, ds);
  cli::RunReport report;
  report.command = command;
  if (auto it = loaded.meta.find("seed"); it != loaded.meta.end()) {
    report.seed = std::strtoull(it->second.c_str(), nullptr, 10);
  }
  cli::summarize(report, loaded.ensemble);
  cli::score(report, loaded.ensemble, ds, flags.options());
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.to_json().dump(2) << '\n';
  return kExitOk;
}

// inspect ------------------------------------------------------------------

int cmd_inspect(const std::string& model, const std::string& command) {
  const LoadedEnsemble loaded = load_ensemble(model);
  cli::RunReport report;
  report.command = command;
  if (auto it = loaded.meta.find("seed"); it != loaded.meta.end()) {
    report.seed = std::strtoull(it->second.c_str(), nullptr, 10);
  }
  cli::summarize(report, loaded.ensemble);
  nlohmann::ordered_json j = report.to_json();
  j.erase("evaluation");
  j.erase("wall_seconds");
  j["classes"] = loaded.ensemble.n_classes();
  j["class_sizes"] = loaded.ensemble.class_sizes();
  char checksum[17];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(loaded.ensemble.dataset_checksum()));
  j["dataset_checksum"] = checksum;
  j["meta"] = loaded.meta;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdkit: stochastic discrimination ensembles"};
  app.require_subcommand(1);
  const std::string command = echo(argc, argv);

  std::string reproduce_dir;
  bool show_explained = false;
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce the ten-point worked example and check it");
  reproduce->add_option("outdir", reproduce_dir, "Output directory")->required();
  reproduce->add_flag("--show-explained", show_explained, "Also list explained exact-vs-printed differences");

  std::string fixture_dir;
  auto* fixture = app.add_subcommand("export-fixture", "Write the worked example as CSV and .sdm files");
  fixture->add_option("outdir", fixture_dir, "Output directory")->required();

  TrainFlags tf;
  auto* train_cmd = app.add_subcommand("train", "Train an ensemble on a labeled CSV dataset");
  train_cmd->add_option("data", tf.data, "Training dataset CSV")->required();
  train_cmd->add_option("-o,--out", tf.out, "Output ensemble file (.sdm)")->required();
  train_cmd->add_option("-c,--config", tf.config, "key=value config file");
  const std::vector<std::pair<std::string, std::string>> setting_flags = {
      {"seed", "Seed (default: SDKIT_SEED or 0)"},
      {"target-size", "Number of models to accept"},
      {"trials", "Candidates per accepted model"},
      {"enrich-threshold", "Accept the first candidate with |d| >= x"},
      {"enrich-best-of", "Accept the most enriched of T candidates"},
      {"uniformity", "off | threshold:x | best-of:T | biased"},
      {"kinds", "Comma list of halfspace,bisector,slab,cube,l1ball,l2ball or all"},
      {"min-size", "Smallest model size as a fraction of the axis range"},
      {"max-size", "Largest model size as a fraction of the axis range"},
      {"components", "Primitives unioned into one model"},
      {"bbox", "Restrict generation to the training bounding box (true|false)"},
      {"pair", "Enrich for one pair i,j only"}};
  std::map<std::string, CLI::Option*> setting_options;
  for (const auto& [key, help] : setting_flags) {
    setting_options[key] = train_cmd->add_option_function<std::string>(
        "--" + key, [&tf, key = key](const std::string& v) { tf.settings.emplace_back(key, v); }, help)
        ->trigger_on_parse();
  }
  setting_options["enrich-threshold"]->excludes(setting_options["enrich-best-of"]);
  add_classify_flags(train_cmd, tf.classify);

  std::string model_path;
  std::string points_path;
  ClassifyFlags cf;
  auto* classify_cmd = app.add_subcommand("classify", "Classify points with a saved ensemble");
  classify_cmd->add_option("model", model_path, "Ensemble file (.sdm)")->required();
  classify_cmd->add_option("points", points_path, "Points CSV")->required();
  add_classify_flags(classify_cmd, cf);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved ensemble on a labeled CSV dataset");
  evaluate_cmd->add_option("model", model_path, "Ensemble file (.sdm)")->required();
  evaluate_cmd->add_option("data", points_path, "Labeled dataset CSV")->required();
  add_classify_flags(evaluate_cmd, cf);

  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a saved ensemble");
  inspect_cmd->add_option("model", model_path, "Ensemble file (.sdm)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*reproduce) return cmd_reproduce(reproduce_dir, show_explained);
    if (*fixture) return cmd_export_fixture(fixture_dir);
    if (*train_cmd) return cmd_train(tf, command);
    if (*classify_cmd) return cmd_classify(model_path, points_path, cf);
    if (*evaluate_cmd) return cmd_evaluate(model_path, points_path, cf, command);
    if (*inspect_cmd) return cmd_inspect(model_path, command);
  } catch (const ExitError& e) {
    std::cerr << "sdkit: " << e.message << '\n';
    return e.code;
  } catch (const ContractError& e) {
    std::cerr << "sdkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeError& e) {
    std::cerr << "sdkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "sdkit: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
