#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sdkit/geometry.hpp"
#include "sdkit/rational.hpp"

namespace sdkit {

/// An ordered pair of distinct 1-based classes (i, j).
struct ClassPair {
  ClassLabel first = 1;
  ClassLabel second = 2;
  friend auto operator<=>(const ClassPair&, const ClassPair&) = default;
};

/// All unordered pairs i < j over n classes, in lexicographic order.
std::vector<ClassPair> all_pairs(int n_classes);

/// How a model captures each training class. Stored as integer counts so
/// every derived quantity is available exactly; doubles are views.
class ModelRating {
 public:
  ModelRating() = default;
  ModelRating(std::vector<std::size_t> captured, std::vector<std::size_t> class_sizes);

  int n_classes() const noexcept { return static_cast<int>(class_sizes_.size()); }
  /// |m ∩ TR_i|
  std::size_t captured(ClassLabel i) const { return captured_.at(index(i)); }
  /// |TR_i|
  std::size_t class_size(ClassLabel i) const { return class_sizes_.at(index(i)); }
  const std::vector<std::size_t>& captured_counts() const noexcept { return captured_; }
  const std::vector<std::size_t>& class_sizes() const noexcept { return class_sizes_; }
  std::size_t captured_total() const noexcept;

  /// r_i = |m ∩ TR_i| / |TR_i|
  Rational rating_exact(ClassLabel i) const;
  double rating(ClassLabel i) const;

  /// d_ij = r_i - r_j
  Rational enrichment_exact(ClassPair p) const;
  double enrichment(ClassPair p) const;
  /// Sign of d_ij from an integer cross-multiplication; 0 means unenriched.
  int enrichment_sign(ClassPair p) const;
  bool enriched(ClassPair p) const { return enrichment_sign(p) != 0; }

  /// True iff the model captures at least one training point.
  bool covers_training() const noexcept { return captured_total() > 0; }
  /// r'_i = |m ∩ TR_i| / |m ∩ TR|; nullopt when the model captures nothing.
  std::optional<Rational> posterior_exact(ClassLabel i) const;
  std::optional<double> posterior(ClassLabel i) const;

  friend bool operator==(const ModelRating&, const ModelRating&) = default;

 private:
  std::size_t index(ClassLabel i) const;

  std::vector<std::size_t> captured_;
  std::vector<std::size_t> class_sizes_;
};

/// Rates `m` against the labeled training set `ds`. Every class must be non-empty.
ModelRating rate(const WeakModel& m, const LabeledDataset& ds);

/// X_ij(q, m) = (C - r_j) / (r_i - r_j), or 0 when d_ij = 0.
double x_value(const ModelRating& rating, bool in_model, ClassPair p);
Rational x_value_exact(const ModelRating& rating, bool in_model, ClassPair p);
/// Same formula on bare ratings; d = 0 is tested with ==.
double x_value(double r_i, double r_j, bool in_model) noexcept;

/// 2X - 1, moving the poles to +1 / -1. Unenriched models stay at 0.
double x_value_rescaled(const ModelRating& rating, bool in_model, ClassPair p);
Rational x_value_rescaled_exact(const ModelRating& rating, bool in_model, ClassPair p);

}  // namespace sdkit
