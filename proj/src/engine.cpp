#include "sdkit/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "sdkit/rng.hpp"

namespace sdkit {

namespace {

double axis_range(const BoundingBox& box, std::size_t axis) {
  const double r = box.range(axis);
  return r > 0.0 ? r : 1.0;
}

std::vector<double> random_point(SplitMix64& rng, const BoundingBox& box) {
  std::vector<double> p(box.dimension());
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = rng.uniform(box.lo[a], box.hi[a]);
  return p;
}

std::vector<double> random_center(SplitMix64& rng, const BoundingBox& box, std::span<const Point> bias) {
  if (bias.empty()) return random_point(rng, box);
  const auto c = bias[rng.index(bias.size())].coords();
  return {c.begin(), c.end()};
}

RegionPrimitive random_primitive(const GeneratorConfig& cfg, RegionKind kind, SplitMix64& rng,
                                 const BoundingBox& training, const BoundingBox& box,
                                 std::span<const Point> bias) {
  const std::size_t dim = box.dimension();
  auto size_fraction = [&] { return rng.uniform(cfg.min_size, cfg.max_size); };
  switch (kind) {
    case RegionKind::kAxisHalfSpace: {
      const std::size_t axis = rng.index(dim);
      const double threshold = rng.uniform(box.lo[axis], box.hi[axis]);
      return AxisHalfSpace{axis, threshold, rng.coin() ? Side::kAbove : Side::kBelow};
    }
    case RegionKind::kBisector: {
      std::vector<double> near = random_point(rng, box);
      std::vector<double> far = random_point(rng, box);
      while (far == near) far = random_point(rng, box);
      return BisectorHalfSpace{std::move(near), std::move(far)};
    }
    case RegionKind::kSlab: {
      const std::size_t axis = rng.index(dim);
      const double width = size_fraction() * axis_range(training, axis);
      const double mid = rng.uniform(box.lo[axis], box.hi[axis]);
      return AxisSlab{axis, mid - width / 2.0, mid + width / 2.0};
    }
    case RegionKind::kHypercube: {
      std::vector<double> center = random_center(rng, box, bias);
      std::vector<double> half(dim);
      for (std::size_t a = 0; a < dim; ++a) half[a] = size_fraction() * axis_range(training, a) / 2.0;
      return Hypercube{std::move(center), std::move(half)};
    }
    case RegionKind::kL1Ball: {
      std::vector<double> center = random_center(rng, box, bias);
      const double radius = size_fraction() * axis_range(training, rng.index(dim));
      return L1Ball{std::move(center), radius};
    }
    case RegionKind::kL2Ball: {
      std::vector<double> center = random_center(rng, box, bias);
      const double radius = size_fraction() * axis_range(training, rng.index(dim));
      return L2Ball{std::move(center), radius};
    }
  }
  throw ContractError("unknown region kind");
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ContractError("setting '" + key + "': not a number: '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw ContractError("setting '" + key + "': not a non-negative integer: '" + value + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (kinds.empty()) throw ContractError("generator: at least one region kind must be enabled");
  if (!(min_size > 0.0) || !(min_size <= max_size) || !std::isfinite(max_size)) {
    throw ContractError("generator: need 0 < min-size <= max-size");
  }
  if (components < 1) throw ContractError("generator: components must be >= 1");
  if (trials < 1) throw ContractError("generator: trials (T) must be >= 1");
}

void EnrichmentPolicy::validate() const {
  if (mode == EnrichmentMode::kThreshold && !(threshold > 0.0 && threshold <= 1.0)) {
    throw ContractError("enrichment threshold must lie in (0, 1]");
  }
  if (pair && pair->first == pair->second) throw ContractError("enrichment pair needs two distinct classes");
}

void UniformityPolicy::validate() const {
  if (mode == UniformityMode::kMeritThreshold && !(merit_threshold >= 0.0 && merit_threshold <= 1.0)) {
    throw ContractError("merit threshold must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------------------

CoverageCounters::CoverageCounters(const LabeledDataset& ds) {
  for (ClassLabel c = 1; c <= ds.n_classes(); ++c) {
    members_.push_back(ds.members(c));
    counts_.emplace_back(members_.back().size(), 0);
  }
}

std::size_t CoverageCounters::index(ClassLabel c) const {
  if (c < 1 || static_cast<std::size_t>(c) > members_.size()) throw ContractError("class out of range");
  return static_cast<std::size_t>(c - 1);
}

void CoverageCounters::set_counts(ClassLabel c, std::vector<std::size_t> counts) {
  if (counts.size() != members(c).size()) throw ContractError("counter length must equal class size");
  counts_[index(c)] = std::move(counts);
}

void CoverageCounters::record(const WeakModel& m, ClassLabel c, const LabeledDataset& ds) {
  const auto& mem = members(c);
  auto& cnt = counts_[index(c)];
  for (std::size_t k = 0; k < mem.size(); ++k) {
    if (membership(m, ds.points()[mem[k]])) ++cnt[k];
  }
}

std::vector<std::size_t> weak_points(const CoverageCounters& counters, ClassLabel c) {
  const auto& counts = counters.counts(c);
  const auto& mem = counters.members(c);
  std::vector<std::size_t> weak;
  if (counts.empty()) return weak;
  // count < sum / n  <=>  count * n < sum, kept in integers.
  const std::size_t sum = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] * counts.size() < sum) weak.push_back(mem[k]);
  }
  return weak;
}

double merit(const WeakModel& m, std::span<const std::size_t> weak, const LabeledDataset& ds) {
  if (weak.empty()) return 1.0;
  std::size_t covered = 0;
  for (std::size_t idx : weak) covered += membership(m, ds.points().at(idx)) ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(weak.size());
}

BoundingBox sampling_box(const BoundingBox& training_box, bool restrict_to_bbox) {
  if (restrict_to_bbox) return training_box;
  BoundingBox wide = training_box;
  for (std::size_t a = 0; a < wide.dimension(); ++a) {
    const double pad = axis_range(training_box, a) / 2.0;
    wide.lo[a] -= pad;
    wide.hi[a] += pad;
  }
  return wide;
}

WeakModel generate_candidate(const GeneratorConfig& cfg, const BoundingBox& training_box, std::uint64_t counter,
                             std::span<const Point> bias_centers) {
  cfg.validate();
  if (training_box.dimension() == 0) throw ContractError("generator needs a non-empty training bounding box");
  const BoundingBox box = sampling_box(training_box, cfg.restrict_to_bbox);
  SplitMix64 rng = SplitMix64::for_draw(cfg.seed, counter);
  GeometricRegion region;
  for (std::size_t c = 0; c < cfg.components; ++c) {
    const RegionKind kind = cfg.kinds[rng.index(cfg.kinds.size())];
    region.components.push_back({random_primitive(cfg, kind, rng, training_box, box, bias_centers)});
  }
  return WeakModel::region(std::move(region), static_cast<std::int64_t>(counter) + 1);
}

RandomRegionSource::RandomRegionSource(GeneratorConfig cfg, const LabeledDataset& ds)
    : cfg_(std::move(cfg)), box_(BoundingBox::of(ds.points())) {
  cfg_.validate();
}

std::optional<WeakModel> RandomRegionSource::draw(std::uint64_t counter, std::span<const Point> bias_centers) {
  return generate_candidate(cfg_, box_, counter, bias_centers);
}

std::optional<WeakModel> ListSource::draw(std::uint64_t, std::span<const Point>) {
  if (next_ >= models_.size()) return std::nullopt;
  return models_[next_++];
}

// ---------------------------------------------------------------------------

TrainResult train(const LabeledDataset& ds, CandidateSource& source, std::size_t trials,
                  const EnrichmentPolicy& enrich, const UniformityPolicy& unif, std::size_t target_size) {
  ds.require_trainable();
  if (ds.n_classes() < 2) throw ContractError("training needs at least two classes");
  if (target_size < 1) throw ContractError("target size must be >= 1");
  if (trials < 1) throw ContractError("trials (T) must be >= 1");
  enrich.validate();
  unif.validate();
  if (enrich.pair && (enrich.pair->first > ds.n_classes() || enrich.pair->second > ds.n_classes() ||
                      enrich.pair->first < 1 || enrich.pair->second < 1)) {
    throw ContractError("enrichment pair outside the dataset's classes");
  }

  const std::vector<ClassPair> pairs = enrich.pair ? std::vector<ClassPair>{*enrich.pair} : all_pairs(ds.n_classes());
  TrainResult result{Ensemble::for_dataset(ds), {}};
  TrainReport& report = result.report;
  report.target_size = target_size;
  report.budget = trials * target_size;

  CoverageCounters counters(ds);
  const bool threshold_mode = enrich.mode == EnrichmentMode::kThreshold;
  const bool merit_best = unif.mode == UniformityMode::kMeritBestOf;
  // Threshold mode without a best-of selection takes the first qualifying
  // candidate and may spend any part of the remaining budget on one model.
  const bool first_qualifier = threshold_mode && !merit_best;

  struct Pick {
    WeakModel model;
    ModelRating rating;
    ClassLabel positive;
    double merit;
    double enrichment;
  };

  std::size_t round = 0;
  while (result.ensemble.size() < target_size && report.draws < report.budget && !report.source_exhausted) {
    const ClassPair pair = pairs[round % pairs.size()];
    std::vector<Point> bias;
    if (unif.mode == UniformityMode::kBiased) {
      const ClassLabel c = (round / pairs.size()) % 2 == 0 ? pair.first : pair.second;
      for (std::size_t idx : weak_points(counters, c)) bias.push_back(ds.points()[idx]);
    }

    const std::size_t remaining = report.budget - report.draws;
    const std::size_t limit = first_qualifier ? remaining : std::min(trials, remaining);
    std::optional<Pick> best;
    for (std::size_t k = 0; k < limit; ++k) {
      std::optional<WeakModel> cand = source.draw(report.draws, bias);
      if (!cand) {
        report.source_exhausted = true;
        break;
      }
      ++report.draws;
      ModelRating rating = rate(*cand, ds);
      const int sign = rating.enrichment_sign(pair);
      if (sign == 0) continue;
      const double enrichment = std::abs(rating.enrichment(pair));
      if (threshold_mode && enrichment < enrich.threshold) continue;
      const ClassLabel positive = sign > 0 ? pair.first : pair.second;
      double score = 1.0;
      if (unif.mode == UniformityMode::kMeritThreshold || merit_best) {
        score = merit(*cand, weak_points(counters, positive), ds);
        if (unif.mode == UniformityMode::kMeritThreshold && score < unif.merit_threshold) continue;
      }
      Pick pick{std::move(*cand), std::move(rating), positive, score, enrichment};
      if (first_qualifier) {
        best = std::move(pick);
        break;
      }
      const bool better = !best || (merit_best ? (pick.merit > best->merit ||
                                                  (pick.merit == best->merit && pick.enrichment > best->enrichment))
                                               : pick.enrichment > best->enrichment);
      if (better) best = std::move(pick);
    }
    if (best) {
      counters.record(best->model, best->positive, ds);
      result.ensemble.push(std::move(best->model), std::move(best->rating), pair);
    }
    ++round;
  }

  report.accepted = result.ensemble.size();
  report.exhausted = report.accepted < target_size;
  if (report.exhausted) {
    std::ostringstream os;
    os << "accepted " << report.accepted << " of " << target_size << " models after " << report.draws
       << " draws (budget " << report.budget << ")";
    if (report.source_exhausted) os << "; candidate source exhausted";
    report.message = os.str();
  }
  return result;
}

TrainResult train(const LabeledDataset& ds, const GeneratorConfig& cfg, const EnrichmentPolicy& enrich,
                  const UniformityPolicy& unif, std::size_t target_size) {
  RandomRegionSource source(cfg, ds);
  return train(ds, source, cfg.trials, enrich, unif, target_size);
}

// ---------------------------------------------------------------------------

void apply_setting(TrainConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.generator.seed = parse_uint(key, value);
  } else if (key == "target-size") {
    cfg.target_size = parse_uint(key, value);
  } else if (key == "trials") {
    cfg.generator.trials = parse_uint(key, value);
  } else if (key == "enrich-threshold") {
    cfg.enrichment.mode = EnrichmentMode::kThreshold;
    cfg.enrichment.threshold = parse_double(key, value);
  } else if (key == "enrich-best-of") {
    cfg.enrichment.mode = EnrichmentMode::kBestOf;
    cfg.generator.trials = parse_uint(key, value);
  } else if (key == "uniformity") {
    if (value == "off") {
      cfg.uniformity.mode = UniformityMode::kOff;
    } else if (value == "biased") {
      cfg.uniformity.mode = UniformityMode::kBiased;
    } else if (value.starts_with("threshold:")) {
      cfg.uniformity.mode = UniformityMode::kMeritThreshold;
      cfg.uniformity.merit_threshold = parse_double(key, value.substr(10));
    } else if (value.starts_with("best-of:")) {
      cfg.uniformity.mode = UniformityMode::kMeritBestOf;
      cfg.generator.trials = parse_uint(key, value.substr(8));
    } else {
      throw ContractError("setting 'uniformity': expected off | threshold:x | best-of:T | biased, got '" +
                          value + "'");
    }
  } else if (key == "kinds") {
    std::vector<RegionKind> kinds;
    std::istringstream is(value);
    std::string name;
    while (std::getline(is, name, ',')) {
      name = trim(name);
      if (name == "all") {
        kinds = GeneratorConfig{}.kinds;
        continue;
      }
      const auto k = parse_region_kind(name);
      if (!k) throw ContractError("setting 'kinds': unknown region kind '" + name + "'");
      if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
    }
    cfg.generator.kinds = std::move(kinds);
  } else if (key == "min-size") {
    cfg.generator.min_size = parse_double(key, value);
  } else if (key == "max-size") {
    cfg.generator.max_size = parse_double(key, value);
  } else if (key == "components") {
    cfg.generator.components = parse_uint(key, value);
  } else if (key == "bbox") {
    if (value != "true" && value != "false") throw ContractError("setting 'bbox': expected true or false");
    cfg.generator.restrict_to_bbox = value == "true";
  } else if (key == "pair") {
    const auto comma = value.find(',');
    if (comma == std::string::npos) throw ContractError("setting 'pair': expected i,j");
    cfg.enrichment.pair = ClassPair{static_cast<ClassLabel>(parse_uint(key, trim(value.substr(0, comma)))),
                                    static_cast<ClassLabel>(parse_uint(key, trim(value.substr(comma + 1))))};
  } else {
    throw ContractError("unknown setting '" + key + "'");
  }
}

TrainConfig parse_train_config(std::istream& in, TrainConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ContractError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ContractError& e) {
      throw ContractError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

std::string describe(const UniformityPolicy& p) {
  switch (p.mode) {
    case UniformityMode::kOff: return "off";
    case UniformityMode::kBiased: return "biased";
    case UniformityMode::kMeritBestOf: return "best-of";
    case UniformityMode::kMeritThreshold: {
      std::ostringstream os;
      os << "threshold:" << p.merit_threshold;
      return os.str();
    }
  }
  return "?";
}

std::string describe(const EnrichmentPolicy& p) {
  std::ostringstream os;
  if (p.mode == EnrichmentMode::kThreshold) {
    os << "threshold:" << p.threshold;
  } else {
    os << "best-of";
  }
  if (p.pair) os << " pair " << p.pair->first << "," << p.pair->second;
  return os.str();
}

}  // namespace sdkit
