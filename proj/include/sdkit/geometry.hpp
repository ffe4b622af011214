#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sdkit {

/// Raised when an operation is called outside its documented domain
/// (dimension mismatch, id-less point against an explicit subset, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a combinatorial request would exceed the enumeration cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

using PointId = std::uint32_t;
using ClassLabel = int;  // 1-based

class Point {
 public:
  explicit Point(std::vector<double> coords, std::optional<PointId> id = std::nullopt);

  std::size_t dimension() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t axis) const { return coords_[axis]; }
  const std::optional<PointId>& id() const noexcept { return id_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
  std::optional<PointId> id_;
};

/// Points with optional class labels. Labels are 1-based; unlabeled entries
/// hold 0 and are rejected by anything that rates models.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(std::string name, std::vector<Point> points, std::vector<ClassLabel> labels,
                 int n_classes);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<ClassLabel>& labels() const noexcept { return labels_; }
  int n_classes() const noexcept { return n_classes_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dimension() const noexcept { return points_.empty() ? 0 : points_.front().dimension(); }
  bool labeled() const noexcept;

  /// Number of points carrying class `c`.
  std::size_t class_size(ClassLabel c) const;
  std::vector<std::size_t> class_sizes() const;
  /// Indices (into points()) of the members of class `c`.
  std::vector<std::size_t> members(ClassLabel c) const;

  /// Throws ContractError unless every declared class has at least one point.
  void require_trainable() const;

  /// Order-sensitive 64-bit FNV-1a over coordinates, ids and labels.
  std::uint64_t checksum() const;

 private:
  std::string name_;
  std::vector<Point> points_;
  std::vector<ClassLabel> labels_;
  int n_classes_ = 0;
};

/// Per-axis [min, max] of a point set.
struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;

  static BoundingBox of(std::span<const Point> points);
  std::size_t dimension() const noexcept { return lo.size(); }
  double range(std::size_t axis) const { return hi[axis] - lo[axis]; }
  bool contains(const Point& p) const;
};

enum class Side { kBelow, kAbove };

// Region primitives. Every region is closed: boundary points are inside.

/// {q : q[axis] <= threshold} (kBelow) or {q : q[axis] >= threshold} (kAbove).
struct AxisHalfSpace {
  std::size_t axis = 0;
  double threshold = 0.0;
  Side side = Side::kBelow;
  friend bool operator==(const AxisHalfSpace&, const AxisHalfSpace&) = default;
};

/// Points at least as close to `near` as to `far` (Euclidean).
struct BisectorHalfSpace {
  std::vector<double> near;
  std::vector<double> far;
  friend bool operator==(const BisectorHalfSpace&, const BisectorHalfSpace&) = default;
};

/// {q : low <= q[axis] <= high}.
struct AxisSlab {
  std::size_t axis = 0;
  double low = 0.0;
  double high = 0.0;
  friend bool operator==(const AxisSlab&, const AxisSlab&) = default;
};

/// Axis-aligned box |q[a] - center[a]| <= half_edges[a] for every axis.
struct Hypercube {
  std::vector<double> center;
  std::vector<double> half_edges;
  friend bool operator==(const Hypercube&, const Hypercube&) = default;
};

/// City-block ball.
struct L1Ball {
  std::vector<double> center;
  double radius = 0.0;
  friend bool operator==(const L1Ball&, const L1Ball&) = default;
};

/// Euclidean ball.
struct L2Ball {
  std::vector<double> center;
  double radius = 0.0;
  friend bool operator==(const L2Ball&, const L2Ball&) = default;
};

using RegionPrimitive =
    std::variant<AxisHalfSpace, BisectorHalfSpace, AxisSlab, Hypercube, L1Ball, L2Ball>;

enum class RegionKind { kAxisHalfSpace, kBisector, kSlab, kHypercube, kL1Ball, kL2Ball };
inline constexpr std::size_t kRegionKindCount = 6;

RegionKind kind_of(const RegionPrimitive& r) noexcept;
const char* to_string(RegionKind k) noexcept;
std::optional<RegionKind> parse_region_kind(std::string_view name) noexcept;

/// Checks the primitive's invariants; throws ContractError on violation.
void validate(const RegionPrimitive& r);

/// Dimension the primitive is defined over, or nullopt for axis-only
/// primitives (which work in any dimension above their axis).
std::optional<std::size_t> dimension_of(const RegionPrimitive& r) noexcept;

bool contains(const RegionPrimitive& r, const Point& q);

/// Explicit point subset over a finite reference set of `universe` points.
struct ExplicitSubset {
  std::vector<PointId> ids;  // sorted, distinct
  std::size_t universe = 0;
  friend bool operator==(const ExplicitSubset&, const ExplicitSubset&) = default;
};

/// Union over components; each component is the intersection of its primitives.
struct GeometricRegion {
  std::vector<std::vector<RegionPrimitive>> components;
  friend bool operator==(const GeometricRegion&, const GeometricRegion&) = default;
};

class WeakModel {
 public:
  using Body = std::variant<ExplicitSubset, GeometricRegion>;

  /// Builds an explicit-subset model; ids are sorted, must be distinct and < universe.
  static WeakModel subset(std::vector<PointId> ids, std::size_t universe, std::int64_t model_id = 0);
  static WeakModel region(GeometricRegion region, std::int64_t model_id = 0);
  /// Single-primitive geometric model.
  static WeakModel region(RegionPrimitive primitive, std::int64_t model_id = 0);

  std::int64_t id() const noexcept { return id_; }
  void set_id(std::int64_t id) noexcept { id_ = id; }
  const Body& body() const noexcept { return body_; }
  bool is_subset() const noexcept { return std::holds_alternative<ExplicitSubset>(body_); }
  const ExplicitSubset& as_subset() const { return std::get<ExplicitSubset>(body_); }
  const GeometricRegion& as_region() const { return std::get<GeometricRegion>(body_); }

  friend bool operator==(const WeakModel&, const WeakModel&) = default;

 private:
  WeakModel(Body body, std::int64_t id) : body_(std::move(body)), id_(id) {}

  Body body_;
  std::int64_t id_ = 0;
};

/// C_m(q): true iff q lies in m.
bool membership(const WeakModel& m, const Point& q);

/// Largest reference-set size enumerate_k_subsets accepts.
inline constexpr std::size_t kMaxEnumerationSize = 24;

/// All k-subsets of {0..n-1} in lexicographic order of their sorted id tuples.
/// Model ids are 1-based positions in that order.
std::vector<WeakModel> enumerate_k_subsets(std::size_t n, std::size_t k);

/// Interval-union encoding of an explicit subset of collinear points placed at
/// v(q_i) = i on axis 0: each run of consecutive ids [a..b] becomes the slab
/// [a - 0.5, b + 0.5], with the runs touching either end left unbounded.
GeometricRegion interval_encoding(const ExplicitSubset& subset);

}  // namespace sdkit
