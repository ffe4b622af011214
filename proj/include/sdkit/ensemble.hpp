#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sdkit/geometry.hpp"
#include "sdkit/rational.hpp"
#include "sdkit/ratings.hpp"

namespace sdkit {

/// A requested point is covered by no model that captures training points,
/// so W is undefined there.
class UncoveredPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// nullopt means undecided.
using Decision = std::optional<ClassLabel>;

struct EnsembleEntry {
  WeakModel model;
  ModelRating rating;
  /// Pair whose enrichment the model was accepted for. Y_ij averages over the
  /// entries targeting {i, j}; in a two-class ensemble that is every entry.
  ClassPair target;
};

/// One rating stratum of a coverage profile: the models whose r_i equals
/// captured / |TR_i|, and how many of them cover the profiled point.
struct ProfileStratum {
  std::size_t captured = 0;
  Rational rating;
  std::size_t group_size = 0;  // t_r
  std::size_t covering = 0;    // N_{M_t, r, TR_i}(q)
  /// f = covering / group_size, or 0 for an empty stratum.
  Rational ratio_exact;
  double ratio() const { return to_double(ratio_exact); }
};

struct CoverageProfile {
  ClassLabel cls = 1;
  /// Indexed by captured count 0..|TR_i|.
  std::vector<ProfileStratum> strata;
};

/// One term of Y_ij regrouped by the value of r_i.
struct StratumTerm {
  std::size_t captured = 0;
  Rational rating;
  std::size_t group_size = 0;
  Rational weight;      // t_x / t
  Rational group_mean;  // mean X_ij over the stratum
};

/// Models sharing one multiset of posterior ratings, counted per ordering.
struct PermutationGroup {
  std::vector<Rational> canonical;  // sorted descending
  std::map<std::vector<Rational>, std::size_t> counts;
  std::size_t permutations = 0;  // distinct orderings of `canonical`
  bool balanced = false;         // every ordering present equally often
};

struct SymmetryReport {
  std::vector<PermutationGroup> groups;
  std::size_t uncovering_models = 0;  // models capturing no training point
  bool balanced() const;
};

enum class ClassifyMethod { kAuto, kPairwiseY, kArgmaxW };
enum class UndecidedPolicy { kUndecided, kPrior };

struct ClassifyOptions {
  ClassifyMethod method = ClassifyMethod::kAuto;  // Y for 2 classes, W otherwise
  double threshold = 0.5;
  UndecidedPolicy uncovered = UndecidedPolicy::kUndecided;
};

/// Y_ij > threshold -> i, < threshold -> j, equal -> undecided.
Decision classify_y(double y, ClassPair p, double threshold = 0.5) noexcept;

/// Discriminant values for a single point, computed from scratch.
struct Evaluation {
  std::size_t covering = 0;
  std::vector<std::pair<ClassPair, double>> y;  // every pair i < j
  std::vector<std::optional<double>> w;         // index class - 1
};

/// Incrementally maintained state over a fixed list of tracked points.
class DiscriminantState {
 public:
  DiscriminantState(std::vector<Point> tracked, int n_classes, bool exact);

  std::size_t t() const noexcept { return t_; }
  std::size_t pair_size(ClassPair p) const;
  const std::vector<Point>& points() const noexcept { return points_; }
  bool exact() const noexcept { return exact_; }

  void push(const EnsembleEntry& entry);

  /// N(q, M_t)
  std::size_t coverage_count(std::size_t q) const { return coverage_.at(q); }
  /// N(q, M_t) / t; throws ContractError when t = 0.
  double coverage_ratio(std::size_t q) const;
  Rational coverage_ratio_exact(std::size_t q) const;

  /// Running mean of X_ij; throws ContractError when no model targets the pair.
  double y(std::size_t q, ClassPair p) const;
  /// Exact Y_ij; requires exact tracking.
  Rational y_exact(std::size_t q, ClassPair p) const;

  /// W_i(q); throws UncoveredPointError when no rated model covers q.
  double w(std::size_t q, ClassLabel i) const;
  std::size_t w_support(std::size_t q) const { return w_count_.at(q); }

  Decision classify(std::size_t q, ClassPair p, double threshold = 0.5) const;

 private:
  struct PairTrack {
    ClassPair pair;
    std::size_t t = 0;
    std::size_t enriched = 0;
    std::vector<double> y;
    std::vector<Rational> sum;
  };
  const PairTrack& track(ClassPair p, bool& reversed) const;

  std::vector<Point> points_;
  int n_classes_;
  bool exact_;
  std::size_t t_ = 0;
  std::vector<std::size_t> coverage_;
  std::vector<PairTrack> pairs_;
  std::vector<std::vector<double>> w_sum_;  // [q][class]
  std::vector<std::size_t> w_count_;
};

/// The ordered collection M_t of rated models plus optional tracked state.
class Ensemble {
 public:
  explicit Ensemble(std::vector<std::size_t> class_sizes, std::uint64_t dataset_checksum = 0);
  static Ensemble for_dataset(const LabeledDataset& ds);

  int n_classes() const noexcept { return static_cast<int>(class_sizes_.size()); }
  const std::vector<std::size_t>& class_sizes() const noexcept { return class_sizes_; }
  std::uint64_t dataset_checksum() const noexcept { return checksum_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<EnsembleEntry>& entries() const noexcept { return entries_; }
  std::size_t pair_size(ClassPair p) const;

  /// Starts incremental tracking of `points`, replaying any models already present.
  void track(std::vector<Point> points, bool exact = false);
  bool tracking() const noexcept { return state_.has_value(); }
  const DiscriminantState& state() const;

  /// Appends m_{t+1}. The rating must come from a dataset with this
  /// ensemble's class sizes. `target` defaults to (1, 2).
  void push(WeakModel m, ModelRating rating, std::optional<ClassPair> target = std::nullopt);
  /// Rates `m` against `ds` and pushes it.
  void push(WeakModel m, const LabeledDataset& ds, std::optional<ClassPair> target = std::nullopt);

  // Batch quantities, recomputed from the model list.
  std::size_t coverage_count(const Point& q) const;
  double y(const Point& q, ClassPair p) const;
  double y_rescaled(const Point& q, ClassPair p) const;
  Rational y_exact(const Point& q, ClassPair p) const;
  std::optional<double> w(const Point& q, ClassLabel i) const;
  Evaluation evaluate(const Point& q) const;
  Decision classify(const Point& q, const ClassifyOptions& options = {}) const;
  Decision decide(const Evaluation& e, const ClassifyOptions& options = {}) const;

  /// Coverage profile of q by the models of M_t, stratified by r_i.
  CoverageProfile profile(const Point& q, ClassLabel i) const;
  /// Y_ij(q) regrouped by r_i; the weighted means sum to Y_ij exactly.
  std::vector<StratumTerm> decompose_y(const Point& q, ClassPair p) const;
  SymmetryReport symmetry() const;

 private:
  void check_pair(ClassPair p) const;

  std::vector<std::size_t> class_sizes_;
  std::uint64_t checksum_;
  std::vector<EnsembleEntry> entries_;
  std::optional<DiscriminantState> state_;
};

}  // namespace sdkit
