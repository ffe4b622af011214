#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sdkit/dataset_io.hpp"
#include "sdkit/engine.hpp"
#include "sdkit/ensemble.hpp"
#include "sdkit/ensemble_io.hpp"
#include "sdkit/worked_example.hpp"

namespace py = pybind11;
using namespace sdkit;

namespace {

py::object fraction(const Rational& r) {
  static const py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

ClassPair pair_of(ClassLabel i, ClassLabel j) { return ClassPair{i, j}; }

ClassifyMethod method_of(const std::string& name) {
  if (name == "auto") return ClassifyMethod::kAuto;
  if (name == "y") return ClassifyMethod::kPairwiseY;
  if (name == "w") return ClassifyMethod::kArgmaxW;
  throw ContractError("method must be auto, y or w, got '" + name + "'");
}

py::list strata_of(const CoverageProfile& p) {
  py::list out;
  for (const ProfileStratum& s : p.strata) {
    py::dict d;
    d["captured"] = s.captured;
    d["rating"] = fraction(s.rating);
    d["group_size"] = s.group_size;
    d["covering"] = s.covering;
    d["f"] = fraction(s.ratio_exact);
    out.append(d);
  }
  return out;
}

py::list terms_of(const std::vector<StratumTerm>& terms) {
  py::list out;
  for (const StratumTerm& t : terms) {
    py::dict d;
    d["captured"] = t.captured;
    d["rating"] = fraction(t.rating);
    d["group_size"] = t.group_size;
    d["weight"] = fraction(t.weight);
    d["group_mean"] = fraction(t.group_mean);
    out.append(d);
  }
  return out;
}

py::dict report_of(const TrainReport& r) {
  py::dict d;
  d["target_size"] = r.target_size;
  d["accepted"] = r.accepted;
  d["draws"] = r.draws;
  d["budget"] = r.budget;
  d["exhausted"] = r.exhausted;
  d["source_exhausted"] = r.source_exhausted;
  d["message"] = r.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sdkit, m) {
  m.doc() = "Stochastic discrimination ensembles";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<DatasetFormatError>(m, "DatasetFormatError", PyExc_ValueError);
  py::register_exception<EnsembleFormatError>(m, "EnsembleFormatError", PyExc_ValueError);
  py::register_exception<UncoveredPointError>(m, "UncoveredPointError", PyExc_ValueError);

  py::class_<Point>(m, "Point")
      .def(py::init<std::vector<double>, std::optional<PointId>>(), py::arg("coords"), py::arg("id") = py::none())
      .def_property_readonly("coords",
                             [](const Point& p) { return std::vector<double>(p.coords().begin(), p.coords().end()); })
      .def_property_readonly("id", &Point::id)
      .def_property_readonly("dimension", &Point::dimension)
      .def("__repr__", [](const Point& p) {
        const std::vector<double> c(p.coords().begin(), p.coords().end());
        return "Point(" + py::repr(py::cast(c)).cast<std::string>() + ")";
      });

  py::class_<LabeledDataset>(m, "Dataset")
      .def(py::init<std::string, std::vector<Point>, std::vector<ClassLabel>, int>(), py::arg("name"),
           py::arg("points"), py::arg("labels"), py::arg("n_classes"))
      .def_property_readonly("name", &LabeledDataset::name)
      .def_property_readonly("points", &LabeledDataset::points)
      .def_property_readonly("labels", &LabeledDataset::labels)
      .def_property_readonly("n_classes", &LabeledDataset::n_classes)
      .def_property_readonly("dimension", &LabeledDataset::dimension)
      .def("class_sizes", &LabeledDataset::class_sizes)
      .def("__len__", &LabeledDataset::size);

  m.def(
      "read_dataset_csv",
      [](const std::filesystem::path& path, bool require_labels) {
        CsvReadOptions o;
        o.require_label_column = require_labels;
        o.require_labels = require_labels;
        return read_dataset_csv(path, o);
      },
      py::arg("path"), py::arg("require_labels") = true);

  py::class_<WeakModel>(m, "WeakModel")
      .def_static("subset", &WeakModel::subset, py::arg("ids"), py::arg("universe"), py::arg("id") = 0)
      .def_static(
          "l2_ball",
          [](std::vector<double> c, double r, std::int64_t id) { return WeakModel::region(L2Ball{std::move(c), r}, id); },
          py::arg("center"), py::arg("radius"), py::arg("id") = 0)
      .def_static(
          "l1_ball",
          [](std::vector<double> c, double r, std::int64_t id) { return WeakModel::region(L1Ball{std::move(c), r}, id); },
          py::arg("center"), py::arg("radius"), py::arg("id") = 0)
      .def_static(
          "hypercube",
          [](std::vector<double> c, std::vector<double> h, std::int64_t id) {
            return WeakModel::region(Hypercube{std::move(c), std::move(h)}, id);
          },
          py::arg("center"), py::arg("half_edges"), py::arg("id") = 0)
      .def_static(
          "slab",
          [](std::size_t axis, double lo, double hi, std::int64_t id) {
            return WeakModel::region(AxisSlab{axis, lo, hi}, id);
          },
          py::arg("axis"), py::arg("low"), py::arg("high"), py::arg("id") = 0)
      .def_static(
          "half_space",
          [](std::size_t axis, double threshold, bool above, std::int64_t id) {
            return WeakModel::region(AxisHalfSpace{axis, threshold, above ? Side::kAbove : Side::kBelow}, id);
          },
          py::arg("axis"), py::arg("threshold"), py::arg("above") = false, py::arg("id") = 0)
      .def_static(
          "bisector",
          [](std::vector<double> near, std::vector<double> far, std::int64_t id) {
            return WeakModel::region(BisectorHalfSpace{std::move(near), std::move(far)}, id);
          },
          py::arg("near"), py::arg("far"), py::arg("id") = 0)
      .def_property_readonly("id", &WeakModel::id)
      .def_property_readonly("is_subset", &WeakModel::is_subset)
      .def_property_readonly("subset_ids", [](const WeakModel& w) { return w.as_subset().ids; })
      .def("__contains__", [](const WeakModel& w, const Point& q) { return membership(w, q); });

  m.def("membership", &membership, py::arg("model"), py::arg("point"));
  m.def("enumerate_k_subsets", &enumerate_k_subsets, py::arg("n"), py::arg("k"));

  py::class_<ModelRating>(m, "ModelRating")
      .def("captured", &ModelRating::captured, py::arg("cls"))
      .def("rating", &ModelRating::rating, py::arg("cls"))
      .def("rating_exact", [](const ModelRating& r, ClassLabel i) { return fraction(r.rating_exact(i)); },
           py::arg("cls"))
      .def("enrichment", [](const ModelRating& r, ClassLabel i, ClassLabel j) { return r.enrichment({i, j}); },
           py::arg("i") = 1, py::arg("j") = 2)
      .def("posterior", &ModelRating::posterior, py::arg("cls"));

  m.def("rate", &rate, py::arg("model"), py::arg("dataset"));
  m.def(
      "x_value",
      [](const ModelRating& r, bool in_model, ClassLabel i, ClassLabel j) {
        return fraction(x_value_exact(r, in_model, {i, j}));
      },
      py::arg("rating"), py::arg("in_model"), py::arg("i") = 1, py::arg("j") = 2);

  py::class_<Ensemble>(m, "Ensemble")
      .def_static("for_dataset", &Ensemble::for_dataset, py::arg("dataset"))
      .def(
          "push",
          [](Ensemble& e, const WeakModel& w, const LabeledDataset& ds) { e.push(w, ds); }, py::arg("model"),
          py::arg("dataset"))
      .def("__len__", &Ensemble::size)
      .def_property_readonly("n_classes", &Ensemble::n_classes)
      .def_property_readonly("models", [](const Ensemble& e) {
        std::vector<WeakModel> out;
        for (const EnsembleEntry& entry : e.entries()) out.push_back(entry.model);
        return out;
      })
      .def("coverage_count", &Ensemble::coverage_count, py::arg("point"))
      .def(
          "y", [](const Ensemble& e, const Point& q, ClassLabel i, ClassLabel j) { return e.y(q, pair_of(i, j)); },
          py::arg("point"), py::arg("i") = 1, py::arg("j") = 2)
      .def(
          "y_exact",
          [](const Ensemble& e, const Point& q, ClassLabel i, ClassLabel j) {
            return fraction(e.y_exact(q, pair_of(i, j)));
          },
          py::arg("point"), py::arg("i") = 1, py::arg("j") = 2)
      .def(
          "y_rescaled",
          [](const Ensemble& e, const Point& q, ClassLabel i, ClassLabel j) { return e.y_rescaled(q, pair_of(i, j)); },
          py::arg("point"), py::arg("i") = 1, py::arg("j") = 2)
      .def("w", &Ensemble::w, py::arg("point"), py::arg("cls"))
      .def(
          "classify",
          [](const Ensemble& e, const Point& q, const std::string& method, double threshold, bool prior) {
            ClassifyOptions o;
            o.method = method_of(method);
            o.threshold = threshold;
            o.uncovered = prior ? UndecidedPolicy::kPrior : UndecidedPolicy::kUndecided;
            return e.classify(q, o);
          },
          py::arg("point"), py::arg("method") = "auto", py::arg("threshold") = 0.5, py::arg("prior") = false)
      .def(
          "profile", [](const Ensemble& e, const Point& q, ClassLabel i) { return strata_of(e.profile(q, i)); },
          py::arg("point"), py::arg("cls"))
      .def(
          "decompose_y",
          [](const Ensemble& e, const Point& q, ClassLabel i, ClassLabel j) {
            return terms_of(e.decompose_y(q, pair_of(i, j)));
          },
          py::arg("point"), py::arg("i") = 1, py::arg("j") = 2)
      .def("symmetry_balanced", [](const Ensemble& e) { return e.symmetry().balanced(); });

  m.def(
      "train",
      [](const LabeledDataset& ds, const std::map<std::string, std::string>& settings) {
        TrainConfig cfg;
        for (const auto& [key, value] : settings) apply_setting(cfg, key, value);
        TrainResult r = train(ds, cfg.generator, cfg.enrichment, cfg.uniformity, cfg.target_size);
        return py::make_tuple(std::move(r.ensemble), report_of(r.report));
      },
      py::arg("dataset"), py::arg("settings") = std::map<std::string, std::string>{},
      "Trains an ensemble. `settings` uses the config-file keys, e.g. {'seed': '7', 'target-size': '100'}.");

  m.def(
      "write_ensemble",
      [](const std::filesystem::path& path, const Ensemble& e, const EnsembleMeta& meta) {
        write_ensemble(path, e, meta);
      },
      py::arg("path"), py::arg("ensemble"), py::arg("meta") = EnsembleMeta{});
  m.def(
      "read_ensemble",
      [](const std::filesystem::path& path) {
        LoadedEnsemble l = read_ensemble(path);
        return py::make_tuple(std::move(l.ensemble), l.meta);
      },
      py::arg("path"));

  py::module_ fx = m.def_submodule("fixture", "Ten-point worked example");
  fx.def("training_set", &example::training_set);
  fx.def("test_set", &example::test_set);
  fx.def("subset_models", &example::load_permutation);
  fx.def("geometric_models", &example::load_geometric_permutation);
  fx.def("verify", [] {
    const example::GoldenReport r = example::verify();
    py::list out;
    for (const example::GoldenCheck& c : r.checks) out.append(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });
  fx.def("write_artifacts", &example::write_artifacts, py::arg("outdir"));
}
