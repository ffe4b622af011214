#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdkit/ensemble.hpp"
#include "sdkit/geometry.hpp"
#include "sdkit/ratings.hpp"

namespace sdkit {

struct GeneratorConfig {
  std::vector<RegionKind> kinds = {RegionKind::kAxisHalfSpace, RegionKind::kBisector, RegionKind::kSlab,
                                   RegionKind::kHypercube,     RegionKind::kL1Ball,   RegionKind::kL2Ball};
  /// Draw centers, anchors and thresholds inside the training bounding box.
  /// When false they come from the box widened by half its range on each side.
  bool restrict_to_bbox = true;
  /// Model sizes (radii, half-edges, slab widths) as fractions of an axis range.
  double min_size = 0.1;
  double max_size = 0.5;
  /// Primitives unioned into one model.
  std::size_t components = 1;
  std::uint64_t seed = 0;
  /// Candidate budget T per accepted model.
  std::size_t trials = 10;

  void validate() const;
};

enum class EnrichmentMode { kThreshold, kBestOf };

struct EnrichmentPolicy {
  EnrichmentMode mode = EnrichmentMode::kBestOf;
  double threshold = 0.0;  // theta_e, used in threshold mode
  /// Pair to enrich for; nullopt cycles over every pair i < j.
  std::optional<ClassPair> pair;

  void validate() const;
};

enum class UniformityMode { kOff, kMeritThreshold, kMeritBestOf, kBiased };

struct UniformityPolicy {
  UniformityMode mode = UniformityMode::kOff;
  double merit_threshold = 0.0;  // theta_u, used in kMeritThreshold

  void validate() const;
};

/// Per-class coverage counts over training points: for each point of class c,
/// how many accepted models positively enriched for c cover it.
class CoverageCounters {
 public:
  explicit CoverageCounters(const LabeledDataset& ds);

  /// Dataset indices of the members of class c, in dataset order.
  const std::vector<std::size_t>& members(ClassLabel c) const { return members_.at(index(c)); }
  const std::vector<std::size_t>& counts(ClassLabel c) const { return counts_.at(index(c)); }
  void set_counts(ClassLabel c, std::vector<std::size_t> counts);
  /// Credits `m` to class c.
  void record(const WeakModel& m, ClassLabel c, const LabeledDataset& ds);

 private:
  std::size_t index(ClassLabel c) const;

  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> counts_;
};

/// Dataset indices of class-c points covered strictly less often than the
/// class mean. All-equal counts (including all zero) give the empty set.
std::vector<std::size_t> weak_points(const CoverageCounters& counters, ClassLabel c);

/// |m ∩ weak| / |weak|, or 1.0 for an empty weak set.
double merit(const WeakModel& m, std::span<const std::size_t> weak, const LabeledDataset& ds);

/// Region from which random centers, anchors and thresholds are drawn.
BoundingBox sampling_box(const BoundingBox& training_box, bool restrict_to_bbox);

/// Candidate number `counter` of `cfg.seed`. Ball and cube centers come from
/// `bias_centers` when it is non-empty.
WeakModel generate_candidate(const GeneratorConfig& cfg, const BoundingBox& training_box, std::uint64_t counter,
                             std::span<const Point> bias_centers = {});

/// Supplies candidates to the trainer.
class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  /// Candidate for draw `counter`; nullopt once a finite source runs dry.
  virtual std::optional<WeakModel> draw(std::uint64_t counter, std::span<const Point> bias_centers) = 0;
};

/// Pseudo-random geometric candidates per `GeneratorConfig`.
class RandomRegionSource final : public CandidateSource {
 public:
  RandomRegionSource(GeneratorConfig cfg, const LabeledDataset& ds);
  std::optional<WeakModel> draw(std::uint64_t counter, std::span<const Point> bias_centers) override;

 private:
  GeneratorConfig cfg_;
  BoundingBox box_;
};

/// Replays a fixed model list in order.
class ListSource final : public CandidateSource {
 public:
  explicit ListSource(std::vector<WeakModel> models) : models_(std::move(models)) {}
  std::optional<WeakModel> draw(std::uint64_t counter, std::span<const Point> bias_centers) override;

 private:
  std::vector<WeakModel> models_;
  std::size_t next_ = 0;
};

struct TrainReport {
  std::size_t target_size = 0;
  std::size_t accepted = 0;
  std::size_t draws = 0;
  std::size_t budget = 0;
  /// Fewer than target_size models were accepted.
  bool exhausted = false;
  /// The candidate source ran dry before the budget did.
  bool source_exhausted = false;
  std::string message;
};

struct TrainResult {
  Ensemble ensemble;
  TrainReport report;
};

/// Grows an ensemble of `target_size` models: draw candidates, keep those that
/// satisfy the enrichment and uniformity policies, update coverage counters
/// after each acceptance. Draws at most `trials * target_size` candidates.
TrainResult train(const LabeledDataset& ds, CandidateSource& source, std::size_t trials,
                  const EnrichmentPolicy& enrich, const UniformityPolicy& unif, std::size_t target_size);
TrainResult train(const LabeledDataset& ds, const GeneratorConfig& cfg, const EnrichmentPolicy& enrich,
                  const UniformityPolicy& unif, std::size_t target_size);

/// Everything `sdkit train` needs, as read from a key=value config file.
struct TrainConfig {
  GeneratorConfig generator;
  EnrichmentPolicy enrichment;
  UniformityPolicy uniformity;
  std::size_t target_size = 100;
};

/// Applies one key=value setting. Keys match the CLI flag names without the
/// leading dashes: seed, target-size, trials, enrich-threshold, enrich-best-of,
/// uniformity (off | threshold:x | best-of:T | biased), kinds (comma list),
/// min-size, max-size, components, bbox (true|false), pair (i,j).
/// Throws ContractError on an unknown key or malformed value.
void apply_setting(TrainConfig& cfg, const std::string& key, const std::string& value);

/// Parses a config file: one key=value per line, '#' comments, blank lines ignored.
TrainConfig parse_train_config(std::istream& in, TrainConfig base = {});

std::string describe(const UniformityPolicy& p);
std::string describe(const EnrichmentPolicy& p);

}  // namespace sdkit
