#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slim/csv.hpp"
#include "slim/errors.hpp"
#include "slim/evaluation.hpp"
#include "slim/folds.hpp"
#include "slim/model_io.hpp"
#include "slim/mps.hpp"
#include "slim/polish.hpp"
#include "slim/rules.hpp"
#include "slim/solver.hpp"
#include "slim/sweep.hpp"
#include "slim/synth.hpp"

namespace py = pybind11;
using namespace slim;

namespace {

// Rationals cross the boundary as strings on the way in and as
// fractions.Fraction on the way out, so nothing is rounded.
Rational rational_arg(const py::object& value) { return parse_rational(py::str(value).cast<std::string>()); }

py::object fraction(const Rational& value) {
  return py::module_::import("fractions").attr("Fraction")(to_string(value));
}

py::dict confusion_dict(const ConfusionCounts& c) {
  py::dict d;
  d["tp"] = c.tp;
  d["fp"] = c.fp;
  d["tn"] = c.tn;
  d["fn"] = c.fn;
  d["tpr"] = fraction(c.tpr());
  d["fpr"] = fraction(c.fpr());
  return d;
}

struct Problem {
  LatticeSpec lattice;
  PenaltyConfig cfg;
};

Problem problem_for(const BinaryDataset& data, const py::object& w_plus, int max_terms, int coef_bound,
                    int intercept_bound) {
  Problem p{LatticeSpec::uniform(data.num_features(), coef_bound, intercept_bound), {}};
  p.lattice.validate(data.num_features());
  p.cfg = PenaltyConfig::for_data(rational_arg(w_plus), static_cast<std::int64_t>(data.num_rows()),
                                  data.num_features(), p.lattice, max_terms);
  return p;
}

py::dict train(const BinaryDataset& data, const py::object& w_plus, int max_terms, int coef_bound,
               int intercept_bound, std::optional<double> time_limit, std::optional<std::uint64_t> node_limit,
               std::size_t pool, bool polish_result) {
  const auto problem = problem_for(data, w_plus, max_terms, coef_bound, intercept_bound);
  const auto agg = aggregate(data);
  SolveConfig scfg;
  scfg.time_limit_seconds = time_limit;
  scfg.node_limit = node_limit;
  scfg.pool_size = pool;
  scfg.validate();
  SolveResult result;
  {
    py::gil_scoped_release release;
    result = solve(agg, problem.cfg, problem.lattice, scfg);
  }
  ScoringSystem model = result.report.best;
  if (polish_result) model = polish(model, agg, problem.cfg, problem.lattice).model;
  py::list pool_models;
  for (const auto& entry : result.pool.entries) pool_models.append(entry.model);
  py::dict out;
  out["model"] = model;
  out["status"] = to_string(result.report.status);
  out["objective"] = fraction(result.report.best_objective);
  out["lower_bound"] = fraction(result.report.lower_bound);
  out["gap"] = fraction(result.report.gap);
  out["nodes"] = result.report.nodes_explored;
  out["pool"] = pool_models;
  return out;
}

py::dict run_sweep(const BinaryDataset& data, const py::object& grid, std::uint64_t seed, int folds, int max_terms,
                   std::size_t pool, std::optional<double> time_limit, unsigned threads) {
  SweepProtocol protocol;
  if (py::isinstance<py::str>(grid)) {
    protocol = SweepProtocol::preset(grid.cast<std::string>());
  } else {
    for (const auto& item : grid) protocol.w_plus_grid.push_back(rational_arg(py::reinterpret_borrow<py::object>(item)));
  }
  protocol.cv_folds = folds;
  protocol.max_terms = max_terms;
  protocol.pool_size = pool;
  const auto assignment = make_folds(data, seed, 1.0 / 3.0, folds);
  SweepOptions options;
  options.solve.time_limit_seconds = time_limit;
  options.solve.pool_size = pool;
  options.threads = threads;
  SweepResult result;
  {
    py::gil_scoped_release release;
    result = sweep(data, assignment, protocol, LatticeSpec::uniform(data.num_features()), options);
  }
  py::list points;
  for (const auto& p : result.points) {
    py::dict d;
    d["w_plus"] = fraction(p.w_plus);
    d["ok"] = p.status == PointStatus::kOk;
    d["error"] = p.error;
    d["model"] = p.model;
    d["chosen_terms"] = p.chosen_terms;
    d["test"] = confusion_dict(p.test);
    d["validation"] = confusion_dict(p.validation);
    points.append(d);
  }
  py::dict out;
  out["points"] = points;
  out["test_auc"] = fraction(result.test_curve.auc);
  out["validation_auc"] = fraction(result.validation_curve.auc);
  out["test_rows"] = assignment.test_rows();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse integer scoring systems by exact 0-1 loss minimization";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<BinaryDataset>(m, "Dataset")
      .def(py::init([](std::vector<std::string> names, const std::vector<std::vector<int>>& rows,
                       const std::vector<int>& labels) { return BinaryDataset::from_rows(std::move(names), rows, labels); }),
           py::arg("feature_names"), py::arg("rows"), py::arg("labels"))
      .def_property_readonly("num_rows", &BinaryDataset::num_rows)
      .def_property_readonly("num_features", &BinaryDataset::num_features)
      .def_property_readonly("feature_names", &BinaryDataset::feature_names)
      .def_property_readonly("labels", &BinaryDataset::labels)
      .def("row", [](const BinaryDataset& d, std::size_t i) {
        if (i >= d.num_rows()) throw py::index_error("row out of range");
        return std::vector<int>(d.row(i).begin(), d.row(i).end());
      })
      .def("subset", [](const BinaryDataset& d, const std::vector<std::size_t>& rows) { return d.subset(rows); })
      .def("to_csv", [](const BinaryDataset& d, const std::string& path) { write_csv(d, path); }, py::arg("path"))
      .def("__len__", &BinaryDataset::num_rows)
      .def("__repr__", [](const BinaryDataset& d) {
        return "<Dataset " + std::to_string(d.num_rows()) + " rows x " + std::to_string(d.num_features()) + " features>";
      });

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("label_column") = "y", py::arg("positive_token") = "+1");
  m.def("synth_recidivism",
        [](std::size_t n, std::uint64_t seed, double prevalence) {
          return synth_generate(recidivism_like_spec(prevalence), n, seed);
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("prevalence") = 0.59);
  m.def("synth_planted", &synth_planted, py::arg("truth"), py::arg("n"), py::arg("seed") = 0, py::arg("marginal") = 0.5);

  py::class_<ScoringSystem>(m, "ScoringSystem")
      .def(py::init([](int intercept, const std::vector<int>& points, std::vector<std::string> names) {
             return ScoringSystem::from_dense(intercept, points, std::move(names));
           }),
           py::arg("intercept"), py::arg("points"), py::arg("feature_names"))
      .def_readonly("intercept", &ScoringSystem::intercept)
      .def_readonly("feature_names", &ScoringSystem::feature_names)
      .def_property_readonly("terms",
                             [](const ScoringSystem& s) {
                               std::vector<std::pair<std::string, int>> out;
                               for (const auto& t : s.terms) out.emplace_back(s.feature_names.at(t.feature), t.points);
                               return out;
                             })
      .def_property_readonly("points", &ScoringSystem::dense)
      .def("score", [](const ScoringSystem& s, const std::vector<std::uint8_t>& x) { return score(s, x); })
      .def("predict", [](const ScoringSystem& s, const BinaryDataset& d) {
        std::vector<int> out(d.num_rows());
        for (std::size_t i = 0; i < d.num_rows(); ++i) out[i] = predict(s, d.row(i));
        return out;
      })
      .def("sheet", [](const ScoringSystem& s, const std::string& outcome) { return format_sheet(s, outcome); },
           py::arg("outcome") = "Y = +1")
      .def("to_json", [](const ScoringSystem& s) {
        return to_json(ModelDocument{s, LatticeSpec::uniform(s.num_features()), PenaltyConfig{}, {}});
      })
      .def_static("from_json", [](const std::string& text) { return model_from_json(text).model; })
      .def_static("from_sheet", &parse_sheet, py::arg("text"), py::arg("feature_names"))
      .def(py::self == py::self)
      .def("__repr__", [](const ScoringSystem& s) {
        std::string text = "<ScoringSystem intercept=" + std::to_string(s.intercept);
        for (const auto& t : s.terms) text += " " + s.feature_names.at(t.feature) + ":" + std::to_string(t.points);
        return text + ">";
      });

  m.def("train", &train, py::arg("data"), py::arg("w_plus") = "1", py::arg("max_terms") = 8,
        py::arg("coef_bound") = 10, py::arg("intercept_bound") = 100, py::arg("time_limit") = 60.0,
        py::arg("node_limit") = std::nullopt, py::arg("pool") = 500, py::arg("polish") = false,
        "Exact branch-and-bound fit; returns the model, status, objective, bound and gap.");

  m.def(
      "polish",
      [](const ScoringSystem& model, const BinaryDataset& data, const py::object& w_plus, int coef_bound,
         int intercept_bound) {
        const auto problem = problem_for(data, w_plus, static_cast<int>(data.num_features()), coef_bound, intercept_bound);
        return polish(model, aggregate(data), problem.cfg, problem.lattice).model;
      },
      py::arg("model"), py::arg("data"), py::arg("w_plus") = "1", py::arg("coef_bound") = 10,
      py::arg("intercept_bound") = 100, "Least-loss model on the same active set.");

  m.def(
      "objective",
      [](const ScoringSystem& model, const BinaryDataset& data, const py::object& w_plus, int max_terms) {
        const auto problem = problem_for(data, w_plus, max_terms, 10, 100);
        const auto v = objective(model, aggregate(data), problem.cfg);
        py::dict d;
        d["weighted_error"] = fraction(v.weighted_error);
        d["total"] = fraction(v.total);
        d["l0"] = v.l0_count;
        d["l1"] = v.l1_sum;
        return d;
      },
      py::arg("model"), py::arg("data"), py::arg("w_plus") = "1", py::arg("max_terms") = 8);

  m.def("confusion", [](const ScoringSystem& s, const BinaryDataset& d) { return confusion_dict(confusion(s, d)); });
  m.def(
      "auc",
      [](const std::vector<std::pair<py::object, py::object>>& points) {
        std::vector<RocCoordinate> coords;
        for (const auto& [f, t] : points) coords.emplace_back(rational_arg(f), rational_arg(t));
        return fraction(auc(coords));
      },
      py::arg("points"), "Trapezoid area with (0,0) and (1,1) anchors.");
  m.def(
      "calibration",
      [](const ScoringSystem& s, const BinaryDataset& d, int bins) {
        py::list out;
        for (const auto& b : calibration(s, d, bins).bins) {
          py::dict item;
          item["min_score"] = b.min_score;
          item["max_score"] = b.max_score;
          item["count"] = b.count;
          item["positives"] = b.positives;
          out.append(item);
        }
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("bins") = 10);
  m.def(
      "make_folds",
      [](const BinaryDataset& d, std::uint64_t seed, double test_ratio, int folds) {
        const auto f = make_folds(d, seed, test_ratio, folds);
        py::dict out;
        out["test_rows"] = f.test_rows();
        out["cv_fold"] = f.cv_fold;
        return out;
      },
      py::arg("data"), py::arg("seed") = 0, py::arg("test_ratio") = 1.0 / 3.0, py::arg("folds") = 5);
  m.def("sweep", &run_sweep, py::arg("data"), py::arg("grid") = "balanced", py::arg("seed") = 0, py::arg("folds") = 5,
        py::arg("max_terms") = 8, py::arg("pool") = 500, py::arg("time_limit") = 60.0, py::arg("threads") = 1);
  m.def(
      "mine_rules",
      [](const BinaryDataset& d, const py::object& min_support, const py::object& min_confidence, int max_vars) {
        MiningOptions opt;
        opt.min_support = rational_arg(min_support);
        opt.min_confidence = rational_arg(min_confidence);
        opt.max_antecedent = max_vars;
        const auto names = d.feature_names();
        py::list out;
        for (const auto& r : mine_rules(d, opt)) {
          py::dict item;
          std::vector<std::string> antecedent;
          for (std::size_t j : r.antecedent) antecedent.push_back(names[j]);
          item["antecedent"] = antecedent;
          item["support"] = fraction(r.support);
          item["confidence"] = fraction(r.confidence);
          item["lift"] = fraction(r.lift);
          out.append(item);
        }
        return out;
      },
      py::arg("data"), py::arg("min_support") = "0.05", py::arg("min_confidence") = "0.01", py::arg("max_vars") = 2);
  m.def(
      "export_mps",
      [](const BinaryDataset& d, const std::string& variant, const py::object& w_plus, int max_terms, int coef_bound,
         int intercept_bound, std::optional<ScoringSystem> active_from) {
        const auto problem = problem_for(d, w_plus, max_terms, coef_bound, intercept_bound);
        std::optional<ActiveSet> active;
        if (active_from) active = ActiveSet::of(*active_from);
        return export_mps(aggregate(d), problem.cfg, problem.lattice, parse_mps_variant(variant), active);
      },
      py::arg("data"), py::arg("variant") = "aggregated", py::arg("w_plus") = "1", py::arg("max_terms") = 8,
      py::arg("coef_bound") = 10, py::arg("intercept_bound") = 100, py::arg("active_from") = std::nullopt);
}
