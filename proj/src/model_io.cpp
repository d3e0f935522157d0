#include "slim/model_io.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "slim/errors.hpp"

namespace slim {

using Json = nlohmann::ordered_json;

std::string to_json(const ModelDocument& doc) {
  Json j;
  j["intercept"] = doc.model.intercept;
  j["terms"] = Json::array();
  for (const auto& t : doc.model.terms) {
    j["terms"].push_back({{"feature", doc.model.feature_names.at(t.feature)}, {"index", t.feature}, {"points", t.points}});
  }
  j["features"] = doc.model.feature_names;
  j["lattice"] = {{"coef_bound", doc.lattice.coef_bound},
                  {"intercept_bound", doc.lattice.intercept_bound},
                  {"margin", to_string(doc.lattice.margin)}};
  j["config"] = {{"w_plus", to_string(doc.config.w_plus)},
                 {"w_minus", to_string(doc.config.w_minus)},
                 {"c0", to_string(doc.config.c0)},
                 {"epsilon", to_string(doc.config.epsilon)},
                 {"max_terms", doc.config.max_terms}};
  j["provenance"] = Json::object();
  for (const auto& [k, v] : doc.provenance) j["provenance"][k] = v;
  return j.dump(2) + "\n";
}

ModelDocument model_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    ModelDocument doc;
    const auto names = j.at("features").get<std::vector<std::string>>();
    std::vector<int> dense(names.size(), 0);
    for (const auto& t : j.at("terms")) {
      const auto index = t.at("index").get<std::size_t>();
      if (index >= names.size()) throw DataError("term index out of range");
      if (t.contains("feature") && t.at("feature").get<std::string>() != names[index]) {
        throw DataError("term feature name does not match index " + std::to_string(index));
      }
      if (dense[index] != 0) throw DataError("duplicate term for feature " + names[index]);
      dense[index] = t.at("points").get<int>();
    }
    doc.model = ScoringSystem::from_dense(j.at("intercept").get<int>(), dense, names);
    if (j.contains("lattice")) {
      const auto& l = j.at("lattice");
      doc.lattice.coef_bound = l.at("coef_bound").get<std::vector<int>>();
      doc.lattice.intercept_bound = l.at("intercept_bound").get<int>();
      doc.lattice.margin = parse_rational(l.at("margin").get<std::string>());
    } else {
      doc.lattice = LatticeSpec::uniform(names.size());
    }
    if (j.contains("config")) {
      const auto& c = j.at("config");
      doc.config.w_plus = parse_rational(c.at("w_plus").get<std::string>());
      doc.config.w_minus = parse_rational(c.at("w_minus").get<std::string>());
      doc.config.c0 = parse_rational(c.at("c0").get<std::string>());
      doc.config.epsilon = parse_rational(c.at("epsilon").get<std::string>());
      doc.config.max_terms = c.at("max_terms").get<int>();
    }
    if (j.contains("provenance")) {
      for (const auto& [k, v] : j.at("provenance").items()) {
        doc.provenance[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    return doc;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

std::string to_json(const SolveReport& report) {
  Json j;
  j["status"] = to_string(report.status);
  j["best_objective"] = to_string(report.best_objective);
  j["lower_bound"] = to_string(report.lower_bound);
  j["root_bound"] = to_string(report.root_bound);
  j["gap"] = to_string(report.gap);
  j["best_objective_value"] = to_double(report.best_objective);
  j["lower_bound_value"] = to_double(report.lower_bound);
  j["gap_value"] = to_double(report.gap);
  j["weighted_error"] = to_string(report.best_value.weighted_error);
  j["l0"] = report.best_value.l0_count;
  j["l1"] = report.best_value.l1_sum;
  j["positive_errors"] = report.best_value.positive_errors;
  j["negative_errors"] = report.best_value.negative_errors;
  j["nodes_explored"] = report.nodes_explored;
  j["wall_time"] = report.wall_time;
  return j.dump(2) + "\n";
}

namespace {

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

std::string pad_left(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

std::string points_text(int points) {
  return std::to_string(points) + (std::abs(points) == 1 ? " point" : " points");
}

}  // namespace

std::string format_sheet(const ScoringSystem& model, const std::string& outcome) {
  std::vector<Term> rows = model.terms;
  std::stable_sort(rows.begin(), rows.end(), [](const Term& a, const Term& b) { return a.points > b.points; });

  std::size_t name_width = 28;
  std::size_t points_width = 9;
  for (const auto& t : rows) {
    name_width = std::max(name_width, model.feature_names.at(t.feature).size());
    points_width = std::max(points_width, points_text(t.points).size());
  }
  const std::string total_label =
      rows.empty() ? "NO ROWS TO ADD" : "ADD POINTS FROM ROWS 1-" + std::to_string(rows.size());
  name_width = std::max(name_width, total_label.size());
  const std::size_t index_width = std::max<std::size_t>(3, std::to_string(rows.size()).size() + 1);

  const std::string rule = "+" + std::string(index_width + 2, '-') + "+" + std::string(name_width + 2, '-') + "+" +
                           std::string(points_width + 2, '-') + "+----------+\n";
  std::ostringstream out;
  out << "PREDICT " << outcome << " IF SCORE > " << -model.intercept << "\n";
  out << rule;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << "| " << pad(std::to_string(r + 1) + ".", index_width) << " | "
        << pad(model.feature_names.at(rows[r].feature), name_width) << " | "
        << pad_left(points_text(rows[r].points), points_width) << " | " << (r == 0 ? "  " : "+ ") << "...... |\n";
  }
  if (!rows.empty()) out << rule;
  out << "| " << pad("", index_width) << " | " << pad(total_label, name_width) << " | "
      << pad_left("SCORE", points_width) << " | = ...... |\n";
  out << rule;
  return out.str();
}

ScoringSystem parse_sheet(const std::string& text, const std::vector<std::string>& feature_names) {
  static const std::regex threshold(R"(^PREDICT .* IF SCORE > (-?[0-9]+)\s*$)");
  static const std::regex row(R"(^\|\s*([0-9]+)\.\s*\|\s(.*?)\s*\|\s*(-?[0-9]+) points?\s*\|)");
  std::istringstream in(text);
  std::string line;
  std::optional<int> intercept;
  std::vector<int> dense(feature_names.size(), 0);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, threshold)) {
      intercept = -std::stoi(m[1].str());
    } else if (std::regex_search(line, m, row)) {
      const std::string name = m[2].str();
      const auto it = std::find(feature_names.begin(), feature_names.end(), name);
      if (it == feature_names.end()) throw DataError("sheet references unknown feature '" + name + "'");
      const auto j = static_cast<std::size_t>(it - feature_names.begin());
      if (dense[j] != 0) throw DataError("sheet lists feature '" + name + "' twice");
      dense[j] = std::stoi(m[3].str());
      if (dense[j] == 0) throw DataError("sheet row for '" + name + "' has zero points");
    }
  }
  if (!intercept) throw DataError("sheet has no 'PREDICT ... IF SCORE > t' line");
  return ScoringSystem::from_dense(*intercept, dense, feature_names);
}

}  // namespace slim
