#include "sdkit/ratings.hpp"

#include <numeric>
#include <string>

namespace sdkit {

std::vector<ClassPair> all_pairs(int n_classes) {
  std::vector<ClassPair> out;
  for (ClassLabel i = 1; i <= n_classes; ++i) {
    for (ClassLabel j = i + 1; j <= n_classes; ++j) out.push_back({i, j});
  }
  return out;
}

ModelRating::ModelRating(std::vector<std::size_t> captured, std::vector<std::size_t> class_sizes)
    : captured_(std::move(captured)), class_sizes_(std::move(class_sizes)) {
  if (captured_.size() != class_sizes_.size()) {
    throw ContractError("rating: captured counts and class sizes differ in length");
  }
  for (std::size_t i = 0; i < class_sizes_.size(); ++i) {
    if (class_sizes_[i] == 0) throw ContractError("rating: class " + std::to_string(i + 1) + " is empty");
    if (captured_[i] > class_sizes_[i]) throw ContractError("rating: captured count exceeds class size");
  }
}

std::size_t ModelRating::index(ClassLabel i) const {
  if (i < 1 || i > n_classes()) {
    throw ContractError("class " + std::to_string(i) + " outside 1.." + std::to_string(n_classes()));
  }
  return static_cast<std::size_t>(i - 1);
}

std::size_t ModelRating::captured_total() const noexcept {
  return std::accumulate(captured_.begin(), captured_.end(), std::size_t{0});
}

Rational ModelRating::rating_exact(ClassLabel i) const {
  return Rational(captured(i), class_size(i));
}

double ModelRating::rating(ClassLabel i) const {
  return static_cast<double>(captured(i)) / static_cast<double>(class_size(i));
}

Rational ModelRating::enrichment_exact(ClassPair p) const {
  return rating_exact(p.first) - rating_exact(p.second);
}

double ModelRating::enrichment(ClassPair p) const { return to_double(enrichment_exact(p)); }

int ModelRating::enrichment_sign(ClassPair p) const {
  // c_i / n_i vs c_j / n_j  <=>  c_i * n_j vs c_j * n_i
  const auto lhs = static_cast<unsigned long long>(captured(p.first)) * class_size(p.second);
  const auto rhs = static_cast<unsigned long long>(captured(p.second)) * class_size(p.first);
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

std::optional<Rational> ModelRating::posterior_exact(ClassLabel i) const {
  const std::size_t total = captured_total();
  if (total == 0) return std::nullopt;
  return Rational(captured(i), total);
}

std::optional<double> ModelRating::posterior(ClassLabel i) const {
  const std::size_t total = captured_total();
  if (total == 0) return std::nullopt;
  return static_cast<double>(captured(i)) / static_cast<double>(total);
}

ModelRating rate(const WeakModel& m, const LabeledDataset& ds) {
  ds.require_trainable();
  std::vector<std::size_t> captured(static_cast<std::size_t>(ds.n_classes()), 0);
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (membership(m, ds.points()[k])) ++captured[static_cast<std::size_t>(ds.labels()[k] - 1)];
  }
  return ModelRating(std::move(captured), ds.class_sizes());
}

Rational x_value_exact(const ModelRating& rating, bool in_model, ClassPair p) {
  if (!rating.enriched(p)) return Rational(0);
  const Rational rj = rating.rating_exact(p.second);
  return (Rational(in_model ? 1 : 0) - rj) / rating.enrichment_exact(p);
}

double x_value(const ModelRating& rating, bool in_model, ClassPair p) {
  if (!rating.enriched(p)) return 0.0;
  // (C - c_j/n_j) / (c_i/n_i - c_j/n_j) = (C n_i n_j - c_j n_i) / (c_i n_j - c_j n_i)
  const auto ni = static_cast<long long>(rating.class_size(p.first));
  const auto nj = static_cast<long long>(rating.class_size(p.second));
  const auto ci = static_cast<long long>(rating.captured(p.first));
  const auto cj = static_cast<long long>(rating.captured(p.second));
  const long long num = (in_model ? ni * nj : 0) - cj * ni;
  const long long den = ci * nj - cj * ni;
  return static_cast<double>(num) / static_cast<double>(den);
}

double x_value(double r_i, double r_j, bool in_model) noexcept {
  const double d = r_i - r_j;
  if (d == 0.0) return 0.0;
  return ((in_model ? 1.0 : 0.0) - r_j) / d;
}

double x_value_rescaled(const ModelRating& rating, bool in_model, ClassPair p) {
  if (!rating.enriched(p)) return 0.0;
  return 2.0 * x_value(rating, in_model, p) - 1.0;
}

Rational x_value_rescaled_exact(const ModelRating& rating, bool in_model, ClassPair p) {
  if (!rating.enriched(p)) return Rational(0);
  return 2 * x_value_exact(rating, in_model, p) - 1;
}

}  // namespace sdkit
