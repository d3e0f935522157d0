#include "slim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "slim/errors.hpp"

namespace slim {

namespace {

Rational ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? Rational(0) : make_rational(num, den);
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void check_dimensions(const ScoringSystem& model, const BinaryDataset& data) {
  if (model.num_features() != data.num_features()) {
    throw DataError("model has " + std::to_string(model.num_features()) + " features, dataset has " +
                    std::to_string(data.num_features()));
  }
}

}  // namespace

Rational ConfusionCounts::tpr() const { return ratio(tp, positives()); }
Rational ConfusionCounts::fpr() const { return ratio(fp, negatives()); }

Rational ConfusionCounts::weighted_error(const Rational& w_plus, const Rational& w_minus) const {
  const std::int64_t n = positives() + negatives();
  if (n == 0) return 0;
  return (w_plus * fn + w_minus * fp) / Rational(BigInt(n));
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  tn += other.tn;
  fn += other.fn;
  return *this;
}

ConfusionCounts confusion(const ScoringSystem& model, const BinaryDataset& data, std::span<const std::size_t> rows) {
  check_dimensions(model, data);
  ConfusionCounts c;
  for (std::size_t i : rows) {
    const bool predicted = predict(model, data.row(i)) == 1;
    if (data.label(i) == 1) {
      (predicted ? c.tp : c.fn) += 1;
    } else {
      (predicted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

ConfusionCounts confusion(const ScoringSystem& model, const BinaryDataset& data) {
  std::vector<std::size_t> rows(data.num_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return confusion(model, data, rows);
}

Rational auc(std::span<const RocCoordinate> points) {
  std::vector<RocCoordinate> sorted(points.begin(), points.end());
  for (const auto& [f, t] : sorted) {
    if (f < 0 || f > 1 || t < 0 || t > 1) throw ConfigError("ROC coordinates must lie in [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.insert(sorted.begin(), RocCoordinate{0, 0});
  sorted.emplace_back(1, 1);
  Rational area = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    area += (sorted[i].first - sorted[i - 1].first) * (sorted[i].second + sorted[i - 1].second) / 2;
  }
  return area;
}

RocCurve RocCurve::from_points(std::vector<RocPoint> points) {
  RocCurve curve;
  std::vector<RocCoordinate> coords;
  for (const auto& p : points) coords.emplace_back(p.fpr, p.tpr);
  curve.auc = slim::auc(coords);
  curve.points = std::move(points);
  return curve;
}

std::string RocCurve::to_json() const {
  nlohmann::ordered_json j;
  j["auc"] = to_double(auc);
  j["auc_exact"] = to_string(auc);
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    j["points"].push_back({{"w_plus", to_string(p.w_plus)},
                           {"fpr", to_double(p.fpr)},
                           {"tpr", to_double(p.tpr)},
                           {"fpr_exact", to_string(p.fpr)},
                           {"tpr_exact", to_string(p.tpr)},
                           {"model_id", p.model_id}});
  }
  return j.dump(2) + "\n";
}

std::string RocCurve::to_csv() const {
  std::ostringstream out;
  out << "w_plus,fpr,tpr,model_id\n";
  for (const auto& p : points) {
    out << to_string(p.w_plus) << ',' << fixed(to_double(p.fpr), 6) << ',' << fixed(to_double(p.tpr), 6) << ','
        << p.model_id << '\n';
  }
  return out.str();
}

std::string RocCurve::to_svg(const std::string& title) const {
  constexpr double kSize = 360;
  constexpr double kPad = 50;
  auto x = [&](double f) { return kPad + f * kSize; };
  auto y = [&](double t) { return kPad + (1.0 - t) * kSize; };
  std::ostringstream out;
  const double total = kSize + 2 * kPad;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(1) << "\" y2=\"" << y(1)
      << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    out << "<text x=\"" << x(v) << "\" y=\"" << y(0) + 16 << "\" text-anchor=\"middle\">" << fixed(v, 2)
        << "</text>\n";
    out << "<text x=\"" << x(0) - 6 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">" << fixed(v, 2)
        << "</text>\n";
  }
  out << "<text x=\"" << x(0.5) << "\" y=\"" << total - 10 << "\" text-anchor=\"middle\">FPR</text>\n";
  out << "<text x=\"14\" y=\"" << y(0.5) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << y(0.5)
      << ")\">TPR</text>\n";
  out << "<text x=\"" << x(0.5) << "\" y=\"" << kPad - 16 << "\" text-anchor=\"middle\">" << title
      << " (AUC " << fixed(to_double(auc), 3) << ")</text>\n";
  for (const auto& p : points) {
    out << "<circle cx=\"" << fixed(x(to_double(p.fpr)), 2) << "\" cy=\"" << fixed(y(to_double(p.tpr)), 2)
        << "\" r=\"4\" fill=\"#1f77b4\"><title>W+=" << to_string(p.w_plus) << "</title></circle>\n";
  }
  out << "</svg>\n";
  return out.str();
}

Rational CalibrationBin::rate() const { return ratio(positives, count); }

std::int64_t CalibrationTable::total() const {
  std::int64_t n = 0;
  for (const auto& b : bins) n += b.count;
  return n;
}

std::string CalibrationTable::to_json() const {
  nlohmann::ordered_json j;
  j["binning"] = binning == Binning::kEqualFrequency ? "equal-frequency" : "equal-width";
  j["requested_bins"] = requested_bins;
  j["bins"] = nlohmann::ordered_json::array();
  for (const auto& b : bins) {
    j["bins"].push_back({{"min_score", b.min_score},
                         {"max_score", b.max_score},
                         {"count", b.count},
                         {"positives", b.positives},
                         {"rate", to_double(b.rate())}});
  }
  return j.dump(2) + "\n";
}

std::string CalibrationTable::to_csv() const {
  std::ostringstream out;
  out << "min_score,max_score,count,positives,rate\n";
  for (const auto& b : bins) {
    out << b.min_score << ',' << b.max_score << ',' << b.count << ',' << b.positives << ','
        << fixed(to_double(b.rate()), 6) << '\n';
  }
  return out.str();
}

CalibrationTable calibration(const ScoringSystem& model, const BinaryDataset& data, std::span<const std::size_t> rows,
                             int k, Binning binning) {
  if (k < 1) throw ConfigError("calibration needs at least one bin");
  check_dimensions(model, data);
  // score -> (count, positives), ascending
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> groups;
  for (std::size_t i : rows) {
    auto& g = groups[score(model, data.row(i))];
    g.first += 1;
    g.second += data.label(i) == 1;
  }
  CalibrationTable table;
  table.binning = binning;
  table.requested_bins = k;
  if (groups.empty()) return table;

  const std::int64_t n = static_cast<std::int64_t>(rows.size());
  CalibrationBin current;
  bool open = false;
  auto add = [&](std::int64_t s, std::int64_t count, std::int64_t positives) {
    if (!open) {
      current = CalibrationBin{s, s, 0, 0};
      open = true;
    }
    current.max_score = s;
    current.count += count;
    current.positives += positives;
  };
  auto close = [&] {
    if (open && current.count > 0) table.bins.push_back(current);
    open = false;
  };

  if (binning == Binning::kEqualFrequency) {
    std::int64_t cumulative = 0;
    std::int64_t closed = 0;
    for (const auto& [s, g] : groups) {
      add(s, g.first, g.second);
      cumulative += g.first;
      if (cumulative * k >= (closed + 1) * n) {
        close();
        while (cumulative * k >= (closed + 1) * n) ++closed;
      }
    }
    close();
  } else {
    const std::int64_t lo = groups.begin()->first;
    const std::int64_t span = groups.rbegin()->first - lo + 1;
    std::int64_t current_bin = -1;
    for (const auto& [s, g] : groups) {
      const std::int64_t bin = (s - lo) * k / span;
      if (bin != current_bin) {
        close();
        current_bin = bin;
      }
      add(s, g.first, g.second);
    }
    close();
  }
  return table;
}

CalibrationTable calibration(const ScoringSystem& model, const BinaryDataset& data, int k, Binning binning) {
  std::vector<std::size_t> rows(data.num_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return calibration(model, data, rows, k, binning);
}

std::optional<std::size_t> pick_at_decision_point(std::span<const OperatingPoint> points, const Rational& max_fpr,
                                                  PickCriterion criterion) {
  std::optional<std::size_t> best;
  auto better = [&](const OperatingPoint& a, const OperatingPoint& b) {
    if (criterion == PickCriterion::kMaxTpr) {
      if (a.tpr != b.tpr) return a.tpr > b.tpr;
    } else if (a.weighted_error != b.weighted_error) {
      return a.weighted_error < b.weighted_error;
    }
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.w_plus < b.w_plus;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].fpr > max_fpr) continue;
    if (!best || better(points[i], points[*best])) best = i;
  }
  return best;
}

std::string percent(const Rational& rate) {
  return fixed(std::round(to_double(rate) * 1000.0) / 10.0, 1) + "%";
}

}  // namespace slim
