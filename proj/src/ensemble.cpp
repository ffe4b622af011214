#include "sdkit/ensemble.hpp"

#include <algorithm>
#include <string>

namespace sdkit {

namespace {

ClassPair normalized(ClassPair p) {
  if (p.first > p.second) std::swap(p.first, p.second);
  return p;
}

bool same_pair(ClassPair a, ClassPair b) { return normalized(a) == normalized(b); }

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Argmax over `values`; nullopt on ties or when empty.
template <class T>
Decision unique_argmax(const std::vector<std::optional<T>>& values) {
  Decision best;
  std::optional<T> best_value;
  bool tie = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    if (!best_value || *values[i] > *best_value) {
      best_value = values[i];
      best = static_cast<ClassLabel>(i + 1);
      tie = false;
    } else if (*values[i] == *best_value) {
      tie = true;
    }
  }
  return tie ? std::nullopt : best;
}

}  // namespace

bool SymmetryReport::balanced() const {
  return std::all_of(groups.begin(), groups.end(), [](const PermutationGroup& g) { return g.balanced; });
}

Decision classify_y(double y, ClassPair p, double threshold) noexcept {
  if (y > threshold) return p.first;
  if (y < threshold) return p.second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DiscriminantState

DiscriminantState::DiscriminantState(std::vector<Point> tracked, int n_classes, bool exact)
    : points_(std::move(tracked)), n_classes_(n_classes), exact_(exact),
      coverage_(points_.size(), 0),
      w_sum_(points_.size(), std::vector<double>(static_cast<std::size_t>(n_classes), 0.0)),
      w_count_(points_.size(), 0) {
  for (ClassPair p : all_pairs(n_classes)) {
    PairTrack track{p, 0, 0, std::vector<double>(points_.size(), 0.0), {}};
    if (exact_) track.sum.assign(points_.size(), Rational(0));
    pairs_.push_back(std::move(track));
  }
}

std::size_t DiscriminantState::pair_size(ClassPair p) const {
  bool reversed = false;
  return track(p, reversed).t;
}

const DiscriminantState::PairTrack& DiscriminantState::track(ClassPair p, bool& reversed) const {
  reversed = p.first > p.second;
  const ClassPair key = normalized(p);
  for (const PairTrack& t : pairs_) {
    if (t.pair == key) return t;
  }
  throw ContractError("class pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                      ") not tracked");
}

void DiscriminantState::push(const EnsembleEntry& entry) {
  ++t_;
  const ClassPair target = normalized(entry.target);
  PairTrack* pair = nullptr;
  for (PairTrack& t : pairs_) {
    if (t.pair == target) pair = &t;
  }
  if (pair == nullptr) throw ContractError("entry targets an unknown class pair");
  ++pair->t;
  const bool enriched = entry.rating.enriched(target);
  if (enriched) ++pair->enriched;
  const double tn = static_cast<double>(pair->t);

  const double x_in = x_value(entry.rating, true, target);
  const double x_out = x_value(entry.rating, false, target);
  std::optional<Rational> xq_in;
  std::optional<Rational> xq_out;
  if (exact_) {
    xq_in = x_value_exact(entry.rating, true, target);
    xq_out = x_value_exact(entry.rating, false, target);
  }
  const bool rated = entry.rating.covers_training();

  for (std::size_t q = 0; q < points_.size(); ++q) {
    const bool in = membership(entry.model, points_[q]);
    if (in) ++coverage_[q];
    pair->y[q] = (pair->y[q] * (tn - 1.0) + (in ? x_in : x_out)) / tn;
    if (exact_) pair->sum[q] += in ? *xq_in : *xq_out;
    if (in && rated) {
      ++w_count_[q];
      for (ClassLabel i = 1; i <= n_classes_; ++i) {
        w_sum_[q][static_cast<std::size_t>(i - 1)] += *entry.rating.posterior(i);
      }
    }
  }
}

double DiscriminantState::coverage_ratio(std::size_t q) const {
  if (t_ == 0) throw ContractError("coverage ratio undefined for an empty ensemble");
  return static_cast<double>(coverage_count(q)) / static_cast<double>(t_);
}

Rational DiscriminantState::coverage_ratio_exact(std::size_t q) const {
  if (t_ == 0) throw ContractError("coverage ratio undefined for an empty ensemble");
  return Rational(coverage_count(q), t_);
}

double DiscriminantState::y(std::size_t q, ClassPair p) const {
  bool reversed = false;
  const PairTrack& t = track(p, reversed);
  if (t.t == 0) throw ContractError("no model targets this class pair");
  const double v = t.y.at(q);
  return reversed ? static_cast<double>(t.enriched) / static_cast<double>(t.t) - v : v;
}

Rational DiscriminantState::y_exact(std::size_t q, ClassPair p) const {
  if (!exact_) throw ContractError("exact tracking disabled for this state");
  bool reversed = false;
  const PairTrack& t = track(p, reversed);
  if (t.t == 0) throw ContractError("no model targets this class pair");
  const Rational sum = reversed ? Rational(t.enriched) - t.sum.at(q) : t.sum.at(q);
  return sum / t.t;
}

double DiscriminantState::w(std::size_t q, ClassLabel i) const {
  if (i < 1 || i > n_classes_) throw ContractError("class out of range");
  if (w_count_.at(q) == 0) {
    throw UncoveredPointError("point " + std::to_string(q) + " is covered by no rated model");
  }
  return w_sum_[q][static_cast<std::size_t>(i - 1)] / static_cast<double>(w_count_[q]);
}

Decision DiscriminantState::classify(std::size_t q, ClassPair p, double threshold) const {
  return classify_y(y(q, p), p, threshold);
}

// ---------------------------------------------------------------------------
// Ensemble

Ensemble::Ensemble(std::vector<std::size_t> class_sizes, std::uint64_t dataset_checksum)
    : class_sizes_(std::move(class_sizes)), checksum_(dataset_checksum) {
  if (class_sizes_.size() < 2) throw ContractError("an ensemble discriminates at least two classes");
  for (std::size_t s : class_sizes_) {
    if (s == 0) throw ContractError("ensemble class sizes must be positive");
  }
}

Ensemble Ensemble::for_dataset(const LabeledDataset& ds) {
  ds.require_trainable();
  return Ensemble(ds.class_sizes(), ds.checksum());
}

std::size_t Ensemble::pair_size(ClassPair p) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [&](const EnsembleEntry& e) {
    return same_pair(e.target, p);
  }));
}

void Ensemble::check_pair(ClassPair p) const {
  if (p.first == p.second || p.first < 1 || p.second < 1 || p.first > n_classes() ||
      p.second > n_classes()) {
    throw ContractError("invalid class pair (" + std::to_string(p.first) + "," +
                        std::to_string(p.second) + ")");
  }
}

void Ensemble::track(std::vector<Point> points, bool exact) {
  state_.emplace(std::move(points), n_classes(), exact);
  for (const EnsembleEntry& e : entries_) state_->push(e);
}

const DiscriminantState& Ensemble::state() const {
  if (!state_) throw ContractError("ensemble is not tracking any points");
  return *state_;
}

void Ensemble::push(WeakModel m, ModelRating rating, std::optional<ClassPair> target) {
  if (rating.class_sizes() != class_sizes_) {
    throw ContractError("rating was not computed on this ensemble's training dataset");
  }
  const ClassPair p = normalized(target.value_or(ClassPair{1, 2}));
  check_pair(p);
  entries_.push_back(EnsembleEntry{std::move(m), std::move(rating), p});
  if (state_) state_->push(entries_.back());
}

void Ensemble::push(WeakModel m, const LabeledDataset& ds, std::optional<ClassPair> target) {
  ModelRating rating = rate(m, ds);
  push(std::move(m), std::move(rating), target);
}

std::size_t Ensemble::coverage_count(const Point& q) const {
  std::size_t n = 0;
  for (const EnsembleEntry& e : entries_) n += membership(e.model, q) ? 1 : 0;
  return n;
}

double Ensemble::y(const Point& q, ClassPair p) const {
  check_pair(p);
  double sum = 0.0;
  std::size_t t = 0;
  for (const EnsembleEntry& e : entries_) {
    if (!same_pair(e.target, p)) continue;
    sum += x_value(e.rating, membership(e.model, q), p);
    ++t;
  }
  if (t == 0) throw ContractError("no model targets this class pair");
  return sum / static_cast<double>(t);
}

double Ensemble::y_rescaled(const Point& q, ClassPair p) const {
  check_pair(p);
  double sum = 0.0;
  std::size_t t = 0;
  for (const EnsembleEntry& e : entries_) {
    if (!same_pair(e.target, p)) continue;
    sum += x_value_rescaled(e.rating, membership(e.model, q), p);
    ++t;
  }
  if (t == 0) throw ContractError("no model targets this class pair");
  return sum / static_cast<double>(t);
}

Rational Ensemble::y_exact(const Point& q, ClassPair p) const {
  check_pair(p);
  Rational sum(0);
  std::size_t t = 0;
  for (const EnsembleEntry& e : entries_) {
    if (!same_pair(e.target, p)) continue;
    sum += x_value_exact(e.rating, membership(e.model, q), p);
    ++t;
  }
  if (t == 0) throw ContractError("no model targets this class pair");
  return sum / t;
}

std::optional<double> Ensemble::w(const Point& q, ClassLabel i) const {
  if (i < 1 || i > n_classes()) throw ContractError("class out of range");
  double sum = 0.0;
  std::size_t n = 0;
  for (const EnsembleEntry& e : entries_) {
    if (!e.rating.covers_training() || !membership(e.model, q)) continue;
    sum += *e.rating.posterior(i);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

Evaluation Ensemble::evaluate(const Point& q) const {
  Evaluation out;
  const auto pairs = all_pairs(n_classes());
  std::vector<double> y_sum(pairs.size(), 0.0);
  std::vector<std::size_t> y_n(pairs.size(), 0);
  std::vector<double> w_sum(class_sizes_.size(), 0.0);
  std::size_t w_n = 0;
  for (const EnsembleEntry& e : entries_) {
    const bool in = membership(e.model, q);
    if (in) ++out.covering;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!same_pair(e.target, pairs[k])) continue;
      y_sum[k] += x_value(e.rating, in, pairs[k]);
      ++y_n[k];
    }
    if (in && e.rating.covers_training()) {
      ++w_n;
      for (ClassLabel i = 1; i <= n_classes(); ++i) {
        w_sum[static_cast<std::size_t>(i - 1)] += *e.rating.posterior(i);
      }
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (y_n[k] > 0) out.y.emplace_back(pairs[k], y_sum[k] / static_cast<double>(y_n[k]));
  }
  out.w.resize(class_sizes_.size());
  if (w_n > 0) {
    for (std::size_t i = 0; i < w_sum.size(); ++i) out.w[i] = w_sum[i] / static_cast<double>(w_n);
  }
  return out;
}

Decision Ensemble::decide(const Evaluation& e, const ClassifyOptions& options) const {
  ClassifyMethod method = options.method;
  if (method == ClassifyMethod::kAuto) {
    method = n_classes() == 2 ? ClassifyMethod::kPairwiseY : ClassifyMethod::kArgmaxW;
  }
  auto prior = [&]() -> Decision {
    if (options.uncovered != UndecidedPolicy::kPrior) return std::nullopt;
    std::vector<std::optional<std::size_t>> sizes(class_sizes_.begin(), class_sizes_.end());
    return unique_argmax(sizes);
  };
  if (method == ClassifyMethod::kPairwiseY) {
    if (n_classes() == 2) {
      if (e.y.empty()) return prior();
      return classify_y(e.y.front().second, e.y.front().first, options.threshold);
    }
    std::vector<std::optional<std::size_t>> votes(class_sizes_.size(), std::size_t{0});
    bool any = false;
    for (const auto& [pair, value] : e.y) {
      if (const Decision d = classify_y(value, pair, options.threshold)) {
        ++*votes[static_cast<std::size_t>(*d - 1)];
        any = true;
      }
    }
    if (!any) return prior();
    return unique_argmax(votes);
  }
  const bool covered = std::any_of(e.w.begin(), e.w.end(), [](const auto& v) { return v.has_value(); });
  if (!covered) return prior();
  return unique_argmax(e.w);
}

Decision Ensemble::classify(const Point& q, const ClassifyOptions& options) const {
  return decide(evaluate(q), options);
}

CoverageProfile Ensemble::profile(const Point& q, ClassLabel i) const {
  if (i < 1 || i > n_classes()) throw ContractError("class out of range");
  const std::size_t size = class_sizes_[static_cast<std::size_t>(i - 1)];
  CoverageProfile out;
  out.cls = i;
  out.strata.resize(size + 1);
  for (std::size_t c = 0; c <= size; ++c) {
    out.strata[c].captured = c;
    out.strata[c].rating = Rational(c, size);
  }
  for (const EnsembleEntry& e : entries_) {
    ProfileStratum& s = out.strata[e.rating.captured(i)];
    ++s.group_size;
    if (membership(e.model, q)) ++s.covering;
  }
  for (ProfileStratum& s : out.strata) {
    s.ratio_exact = s.group_size == 0 ? Rational(0) : Rational(s.covering, s.group_size);
  }
  return out;
}

std::vector<StratumTerm> Ensemble::decompose_y(const Point& q, ClassPair p) const {
  check_pair(p);
  const std::size_t size = class_sizes_[static_cast<std::size_t>(p.first - 1)];
  std::vector<std::size_t> group(size + 1, 0);
  std::vector<Rational> sums(size + 1, Rational(0));
  std::size_t t = 0;
  for (const EnsembleEntry& e : entries_) {
    if (!same_pair(e.target, p)) continue;
    const std::size_t c = e.rating.captured(p.first);
    ++group[c];
    sums[c] += x_value_exact(e.rating, membership(e.model, q), p);
    ++t;
  }
  if (t == 0) throw ContractError("no model targets this class pair");
  std::vector<StratumTerm> out;
  for (std::size_t c = 0; c <= size; ++c) {
    if (group[c] == 0) continue;
    out.push_back(StratumTerm{c, Rational(c, size), group[c], Rational(group[c], t), sums[c] / group[c]});
  }
  return out;
}

SymmetryReport Ensemble::symmetry() const {
  SymmetryReport report;
  std::map<std::vector<Rational>, std::map<std::vector<Rational>, std::size_t>> by_canonical;
  for (const EnsembleEntry& e : entries_) {
    if (!e.rating.covers_training()) {
      ++report.uncovering_models;
      continue;
    }
    std::vector<Rational> posterior;
    for (ClassLabel i = 1; i <= n_classes(); ++i) posterior.push_back(*e.rating.posterior_exact(i));
    std::vector<Rational> canonical = posterior;
    std::sort(canonical.begin(), canonical.end(), std::greater<>());
    ++by_canonical[canonical][posterior];
  }
  for (auto& [canonical, counts] : by_canonical) {
    PermutationGroup g;
    g.canonical = canonical;
    g.counts = counts;
    std::size_t denom = 1;
    for (std::size_t i = 0; i < canonical.size();) {
      std::size_t j = i;
      while (j < canonical.size() && canonical[j] == canonical[i]) ++j;
      denom *= factorial(j - i);
      i = j;
    }
    g.permutations = factorial(canonical.size()) / denom;
    const std::size_t first = counts.begin()->second;
    g.balanced = counts.size() == g.permutations &&
                 std::all_of(counts.begin(), counts.end(), [&](const auto& kv) { return kv.second == first; });
    report.groups.push_back(std::move(g));
  }
  return report;
}

}  // namespace sdkit
