#include "sdkit/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>

namespace sdkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ContractError(std::string(what) + ": coordinates must be finite");
  }
}

void require_dim(const Point& q, std::size_t dim) {
  if (q.dimension() != dim) {
    std::ostringstream os;
    os << "dimension mismatch: region has " << dim << ", point has " << q.dimension();
    throw ContractError(os.str());
  }
}

void require_axis(const Point& q, std::size_t axis) {
  if (axis >= q.dimension()) {
    std::ostringstream os;
    os << "dimension mismatch: region uses axis " << axis << ", point has " << q.dimension()
       << " coordinates";
    throw ContractError(os.str());
  }
}

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, 8);
  }
};

}  // namespace

Point::Point(std::vector<double> coords, std::optional<PointId> id)
    : coords_(std::move(coords)), id_(id) {
  if (coords_.empty()) throw ContractError("point must have at least one coordinate");
  require_finite(coords_, "point");
}

LabeledDataset::LabeledDataset(std::string name, std::vector<Point> points,
                               std::vector<ClassLabel> labels, int n_classes)
    : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)),
      n_classes_(n_classes) {
  if (labels_.size() != points_.size()) {
    throw ContractError("labels length must equal points length");
  }
  if (n_classes_ < 0) throw ContractError("negative class count");
  for (ClassLabel c : labels_) {
    if (c < 0 || c > n_classes_) {
      throw ContractError("label " + std::to_string(c) + " outside 1.." + std::to_string(n_classes_));
    }
  }
  for (const Point& p : points_) {
    if (p.dimension() != points_.front().dimension()) {
      throw ContractError("all points of a dataset must share one dimension");
    }
  }
}

bool LabeledDataset::labeled() const noexcept {
  return std::none_of(labels_.begin(), labels_.end(), [](ClassLabel c) { return c == 0; });
}

std::size_t LabeledDataset::class_size(ClassLabel c) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

std::vector<std::size_t> LabeledDataset::class_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_classes_), 0);
  for (ClassLabel c : labels_) {
    if (c > 0) ++sizes[static_cast<std::size_t>(c - 1)];
  }
  return sizes;
}

std::vector<std::size_t> LabeledDataset::members(ClassLabel c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == c) out.push_back(i);
  }
  return out;
}

void LabeledDataset::require_trainable() const {
  if (n_classes_ < 1) throw ContractError("dataset declares no classes");
  if (!labeled()) throw ContractError("dataset '" + name_ + "' has unlabeled points");
  const auto sizes = class_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw ContractError("class " + std::to_string(i + 1) + " of dataset '" + name_ + "' is empty");
    }
  }
}

std::uint64_t LabeledDataset::checksum() const {
  Fnv1a h;
  h.u64(points_.size());
  h.u64(static_cast<std::uint64_t>(n_classes_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    h.u64(p.id() ? static_cast<std::uint64_t>(*p.id()) + 1 : 0);
    h.u64(p.dimension());
    for (double x : p.coords()) h.u64(std::bit_cast<std::uint64_t>(x));
    h.u64(static_cast<std::uint64_t>(labels_[i]));
  }
  return h.h;
}

BoundingBox BoundingBox::of(std::span<const Point> points) {
  BoundingBox box;
  if (points.empty()) return box;
  const std::size_t dim = points.front().dimension();
  box.lo.assign(dim, std::numeric_limits<double>::infinity());
  box.hi.assign(dim, -std::numeric_limits<double>::infinity());
  for (const Point& p : points) {
    require_dim(p, dim);
    for (std::size_t a = 0; a < dim; ++a) {
      box.lo[a] = std::min(box.lo[a], p[a]);
      box.hi[a] = std::max(box.hi[a], p[a]);
    }
  }
  return box;
}

bool BoundingBox::contains(const Point& p) const {
  require_dim(p, dimension());
  for (std::size_t a = 0; a < dimension(); ++a) {
    if (p[a] < lo[a] || p[a] > hi[a]) return false;
  }
  return true;
}

RegionKind kind_of(const RegionPrimitive& r) noexcept {
  return static_cast<RegionKind>(r.index());
}

const char* to_string(RegionKind k) noexcept {
  switch (k) {
    case RegionKind::kAxisHalfSpace: return "halfspace";
    case RegionKind::kBisector: return "bisector";
    case RegionKind::kSlab: return "slab";
    case RegionKind::kHypercube: return "cube";
    case RegionKind::kL1Ball: return "l1ball";
    case RegionKind::kL2Ball: return "l2ball";
  }
  return "?";
}

std::optional<RegionKind> parse_region_kind(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kRegionKindCount; ++i) {
    const auto k = static_cast<RegionKind>(i);
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

void validate(const RegionPrimitive& r) {
  std::visit(
      Overloaded{
          [](const AxisHalfSpace& h) {
            // Infinite thresholds are allowed: they encode unbounded intervals.
            if (std::isnan(h.threshold)) throw ContractError("half-space threshold is NaN");
          },
          [](const BisectorHalfSpace& b) {
            if (b.near.empty() || b.near.size() != b.far.size()) {
              throw ContractError("bisector anchors must be non-empty and of equal dimension");
            }
            require_finite(b.near, "bisector anchor");
            require_finite(b.far, "bisector anchor");
            if (b.near == b.far) throw ContractError("bisector anchors must be distinct");
          },
          [](const AxisSlab& s) {
            if (std::isnan(s.low) || std::isnan(s.high) || !(s.low < s.high)) {
              throw ContractError("slab requires low < high");
            }
          },
          [](const Hypercube& c) {
            if (c.center.empty() || c.center.size() != c.half_edges.size()) {
              throw ContractError("hypercube center and half-edges must match in dimension");
            }
            require_finite(c.center, "hypercube center");
            for (double e : c.half_edges) {
              if (!(e > 0.0) || !std::isfinite(e)) throw ContractError("hypercube half-edges must be > 0");
            }
          },
          [](const L1Ball& b) {
            if (b.center.empty()) throw ContractError("ball center is empty");
            require_finite(b.center, "ball center");
            if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw ContractError("ball radius must be > 0");
          },
          [](const L2Ball& b) {
            if (b.center.empty()) throw ContractError("ball center is empty");
            require_finite(b.center, "ball center");
            if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw ContractError("ball radius must be > 0");
          },
      },
      r);
}

std::optional<std::size_t> dimension_of(const RegionPrimitive& r) noexcept {
  return std::visit(Overloaded{
                        [](const AxisHalfSpace&) -> std::optional<std::size_t> { return std::nullopt; },
                        [](const AxisSlab&) -> std::optional<std::size_t> { return std::nullopt; },
                        [](const BisectorHalfSpace& b) -> std::optional<std::size_t> { return b.near.size(); },
                        [](const Hypercube& c) -> std::optional<std::size_t> { return c.center.size(); },
                        [](const L1Ball& b) -> std::optional<std::size_t> { return b.center.size(); },
                        [](const L2Ball& b) -> std::optional<std::size_t> { return b.center.size(); },
                    },
                    r);
}

bool contains(const RegionPrimitive& r, const Point& q) {
  return std::visit(
      Overloaded{
          [&](const AxisHalfSpace& h) {
            require_axis(q, h.axis);
            return h.side == Side::kBelow ? q[h.axis] <= h.threshold : q[h.axis] >= h.threshold;
          },
          [&](const BisectorHalfSpace& b) {
            require_dim(q, b.near.size());
            double dn = 0.0;
            double df = 0.0;
            for (std::size_t a = 0; a < b.near.size(); ++a) {
              dn += (q[a] - b.near[a]) * (q[a] - b.near[a]);
              df += (q[a] - b.far[a]) * (q[a] - b.far[a]);
            }
            return dn <= df;
          },
          [&](const AxisSlab& s) {
            require_axis(q, s.axis);
            return s.low <= q[s.axis] && q[s.axis] <= s.high;
          },
          [&](const Hypercube& c) {
            require_dim(q, c.center.size());
            for (std::size_t a = 0; a < c.center.size(); ++a) {
              if (std::abs(q[a] - c.center[a]) > c.half_edges[a]) return false;
            }
            return true;
          },
          [&](const L1Ball& b) {
            require_dim(q, b.center.size());
            double d = 0.0;
            for (std::size_t a = 0; a < b.center.size(); ++a) d += std::abs(q[a] - b.center[a]);
            return d <= b.radius;
          },
          [&](const L2Ball& b) {
            require_dim(q, b.center.size());
            double d = 0.0;
            for (std::size_t a = 0; a < b.center.size(); ++a) d += (q[a] - b.center[a]) * (q[a] - b.center[a]);
            return d <= b.radius * b.radius;
          },
      },
      r);
}

WeakModel WeakModel::subset(std::vector<PointId> ids, std::size_t universe, std::int64_t model_id) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ContractError("explicit subset contains duplicate ids");
  }
  if (!ids.empty() && ids.back() >= universe) {
    throw ContractError("explicit subset id " + std::to_string(ids.back()) +
                        " outside reference set of size " + std::to_string(universe));
  }
  return WeakModel(ExplicitSubset{std::move(ids), universe}, model_id);
}

WeakModel WeakModel::region(GeometricRegion region, std::int64_t model_id) {
  bool any = false;
  for (const auto& component : region.components) {
    for (const auto& p : component) {
      validate(p);
      any = true;
    }
  }
  if (!any) throw ContractError("geometric model needs at least one primitive");
  return WeakModel(std::move(region), model_id);
}

WeakModel WeakModel::region(RegionPrimitive primitive, std::int64_t model_id) {
  return region(GeometricRegion{{{std::move(primitive)}}}, model_id);
}

bool membership(const WeakModel& m, const Point& q) {
  if (m.is_subset()) {
    const ExplicitSubset& s = m.as_subset();
    if (!q.id()) throw ContractError("explicit-subset membership needs a point id");
    if (*q.id() >= s.universe) {
      throw ContractError("point id " + std::to_string(*q.id()) + " outside reference set");
    }
    return std::binary_search(s.ids.begin(), s.ids.end(), *q.id());
  }
  // Evaluate every primitive so dimension mismatches surface regardless of order.
  bool inside = false;
  for (const auto& component : m.as_region().components) {
    if (component.empty()) continue;
    bool all = true;
    for (const auto& p : component) all = contains(p, q) && all;
    inside = inside || all;
  }
  return inside;
}

std::vector<WeakModel> enumerate_k_subsets(std::size_t n, std::size_t k) {
  if (n > kMaxEnumerationSize) {
    throw SizeError("enumerate_k_subsets: n = " + std::to_string(n) + " exceeds cap of " +
                    std::to_string(kMaxEnumerationSize));
  }
  if (k > n) throw ContractError("enumerate_k_subsets: k > n");
  std::vector<WeakModel> out;
  std::vector<PointId> ids(k);
  std::iota(ids.begin(), ids.end(), PointId{0});
  std::int64_t next_id = 1;
  while (true) {
    out.push_back(WeakModel::subset(ids, n, next_id++));
    // Advance to the lexicographic successor.
    std::size_t i = k;
    while (i > 0 && ids[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++ids[i - 1];
    for (std::size_t j = i; j < k; ++j) ids[j] = ids[j - 1] + 1;
  }
  return out;
}

GeometricRegion interval_encoding(const ExplicitSubset& subset) {
  if (subset.ids.empty()) throw ContractError("empty subset has no interval encoding");
  const auto last = static_cast<PointId>(subset.universe - 1);
  const double inf = std::numeric_limits<double>::infinity();
  GeometricRegion region;
  std::size_t i = 0;
  while (i < subset.ids.size()) {
    std::size_t j = i;
    while (j + 1 < subset.ids.size() && subset.ids[j + 1] == subset.ids[j] + 1) ++j;
    const PointId a = subset.ids[i];
    const PointId b = subset.ids[j];
    const double low = a == 0 ? -inf : a - 0.5;
    const double high = b == last ? inf : b + 0.5;
    if (std::isinf(low) && std::isinf(high)) {
      region.components.push_back({AxisHalfSpace{0, -inf, Side::kAbove}});
    } else if (std::isinf(low)) {
      region.components.push_back({AxisHalfSpace{0, high, Side::kBelow}});
    } else if (std::isinf(high)) {
      region.components.push_back({AxisHalfSpace{0, low, Side::kAbove}});
    } else {
      region.components.push_back({AxisSlab{0, low, high}});
    }
    i = j + 1;
  }
  return region;
}

}  // namespace sdkit
