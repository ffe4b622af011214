#include "sdkit/ensemble_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace sdkit {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "sdkit-ensemble";
constexpr int kVersion = 1;

json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw EnsembleFormatError("bad real value: " + s);
  }
  return j.get<double>();
}

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

std::vector<double> reals(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(real(x));
  return out;
}

json primitive_json(const RegionPrimitive& r) {
  json j;
  j["kind"] = to_string(kind_of(r));
  if (const auto* h = std::get_if<AxisHalfSpace>(&r)) {
    j["axis"] = h->axis;
    j["threshold"] = real(h->threshold);
    j["side"] = h->side == Side::kBelow ? "below" : "above";
  } else if (const auto* b = std::get_if<BisectorHalfSpace>(&r)) {
    j["near"] = reals(b->near);
    j["far"] = reals(b->far);
  } else if (const auto* s = std::get_if<AxisSlab>(&r)) {
    j["axis"] = s->axis;
    j["low"] = real(s->low);
    j["high"] = real(s->high);
  } else if (const auto* c = std::get_if<Hypercube>(&r)) {
    j["center"] = reals(c->center);
    j["half_edges"] = reals(c->half_edges);
  } else if (const auto* l1 = std::get_if<L1Ball>(&r)) {
    j["center"] = reals(l1->center);
    j["radius"] = real(l1->radius);
  } else if (const auto* l2 = std::get_if<L2Ball>(&r)) {
    j["center"] = reals(l2->center);
    j["radius"] = real(l2->radius);
  }
  return j;
}

RegionPrimitive primitive_from(const json& j) {
  const auto kind = parse_region_kind(j.at("kind").get<std::string>());
  if (!kind) throw EnsembleFormatError("unknown region kind: " + j.at("kind").dump());
  switch (*kind) {
    case RegionKind::kAxisHalfSpace: {
      const auto side = j.at("side").get<std::string>();
      if (side != "below" && side != "above") throw EnsembleFormatError("bad half-space side: " + side);
      return AxisHalfSpace{j.at("axis").get<std::size_t>(), real(j.at("threshold")),
                           side == "below" ? Side::kBelow : Side::kAbove};
    }
    case RegionKind::kBisector:
      return BisectorHalfSpace{reals(j.at("near")), reals(j.at("far"))};
    case RegionKind::kSlab:
      return AxisSlab{j.at("axis").get<std::size_t>(), real(j.at("low")), real(j.at("high"))};
    case RegionKind::kHypercube:
      return Hypercube{reals(j.at("center")), reals(j.at("half_edges"))};
    case RegionKind::kL1Ball:
      return L1Ball{reals(j.at("center")), real(j.at("radius"))};
    case RegionKind::kL2Ball:
      return L2Ball{reals(j.at("center")), real(j.at("radius"))};
  }
  throw EnsembleFormatError("unreachable region kind");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_ensemble(std::ostream& out, const Ensemble& ens, const EnsembleMeta& meta) {
  json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["classes"] = ens.n_classes();
  header["class_sizes"] = ens.class_sizes();
  header["dataset_checksum"] = hex64(ens.dataset_checksum());
  header["models"] = ens.size();
  header["meta"] = json(meta);
  out << header.dump() << '\n';

  for (const EnsembleEntry& e : ens.entries()) {
    json line;
    line["id"] = e.model.id();
    line["target"] = {e.target.first, e.target.second};
    line["captured"] = e.rating.captured_counts();
    if (e.model.is_subset()) {
      const ExplicitSubset& s = e.model.as_subset();
      line["subset"] = {{"universe", s.universe}, {"ids", s.ids}};
    } else {
      json components = json::array();
      for (const auto& component : e.model.as_region().components) {
        json c = json::array();
        for (const auto& p : component) c.push_back(primitive_json(p));
        components.push_back(std::move(c));
      }
      line["region"] = std::move(components);
    }
    out << line.dump() << '\n';
  }
}

void write_ensemble(const std::filesystem::path& path, const Ensemble& ens, const EnsembleMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write ensemble file: " + path.string());
  write_ensemble(out, ens, meta);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LoadedEnsemble read_ensemble(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw EnsembleFormatError("ensemble line " + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(in, line)) throw EnsembleFormatError("empty ensemble file");
  ++lineno;
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != kFormat) fail("not an sdkit ensemble file");
    if (header.value("version", 0) != kVersion) fail("unsupported version");
    const auto sizes = header.at("class_sizes").get<std::vector<std::size_t>>();
    if (static_cast<int>(sizes.size()) != header.at("classes").get<int>()) fail("class count mismatch");
    const auto checksum =
        static_cast<std::uint64_t>(std::stoull(header.at("dataset_checksum").get<std::string>(), nullptr, 16));
    LoadedEnsemble loaded{Ensemble(sizes, checksum), header.at("meta").get<EnsembleMeta>()};
    const auto expected = header.at("models").get<std::size_t>();

    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto id = j.at("id").get<std::int64_t>();
      const auto target = j.at("target").get<std::vector<int>>();
      if (target.size() != 2) fail("target must have two classes");
      ModelRating rating(j.at("captured").get<std::vector<std::size_t>>(), sizes);
      std::optional<WeakModel> model;
      if (j.contains("subset")) {
        const auto& s = j.at("subset");
        model = WeakModel::subset(s.at("ids").get<std::vector<PointId>>(), s.at("universe").get<std::size_t>(), id);
      } else if (j.contains("region")) {
        GeometricRegion region;
        for (const auto& c : j.at("region")) {
          std::vector<RegionPrimitive> component;
          for (const auto& p : c) component.push_back(primitive_from(p));
          region.components.push_back(std::move(component));
        }
        model = WeakModel::region(std::move(region), id);
      } else {
        fail("model has neither 'subset' nor 'region'");
      }
      loaded.ensemble.push(std::move(*model), std::move(rating), ClassPair{target[0], target[1]});
    }
    if (loaded.ensemble.size() != expected) {
      throw EnsembleFormatError("header announces " + std::to_string(expected) + " models, file has " +
                                std::to_string(loaded.ensemble.size()));
    }
    return loaded;
  } catch (const json::exception& e) {
    fail(e.what());
  } catch (const ContractError& e) {
    fail(e.what());
  }
  throw EnsembleFormatError("unreachable");
}

LoadedEnsemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open ensemble file: " + path.string());
  return read_ensemble(in);
}

}  // namespace sdkit
