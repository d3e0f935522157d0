#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "json.hpp"
#include "slim/errors.hpp"
#include "slim/evaluation.hpp"
#include "slim/folds.hpp"
#include "slim/sweep.hpp"
#include "slim/synth.hpp"
#include "support.hpp"

using namespace slim;

namespace {

Rational r(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }

// Independent trapezoid over (fpr, tpr) pairs in doubles.
double trapezoid(std::vector<std::pair<double, double>> pts) {
  pts.emplace_back(0.0, 0.0);
  pts.emplace_back(1.0, 1.0);
  std::sort(pts.begin(), pts.end());
  double area = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2;
  }
  return area;
}

}  // namespace

TEST_CASE("confusion: trivial models and row-wise agreement") {
  SeededRng rng(51);
  const auto data = testing::random_dataset(rng, 80, 4);
  const auto names = data.feature_names();
  const auto always = ScoringSystem::from_dense(1, std::vector<int>(4, 0), names);
  const auto never = ScoringSystem::from_dense(0, std::vector<int>(4, 0), names);
  CHECK(confusion(always, data).tpr() == 1);
  CHECK(confusion(always, data).fpr() == 1);
  CHECK(confusion(never, data).tpr() == 0);
  CHECK(confusion(never, data).fpr() == 0);

  const auto lattice = LatticeSpec::uniform(4, 3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = ScoringSystem::from_dense(static_cast<int>(rng.below(7)) - 3,
                                             testing::random_coefficients(rng, lattice), names);
    const auto c = confusion(m, data);
    CHECK(c.positives() == static_cast<std::int64_t>(data.num_positive()));
    CHECK(c.negatives() == static_cast<std::int64_t>(data.num_negative()));
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (std::size_t i = 0; i < data.num_rows(); ++i) {
      std::int64_t s = m.intercept;
      for (const auto& t : m.terms) s += t.points * data.at(i, t.feature);
      tp += s >= 1 && data.label(i) == 1;
      fp += s >= 1 && data.label(i) == -1;
    }
    CHECK(c.tp == tp);
    CHECK(c.fp == fp);
    // The weighted error is the training loss.
    const auto cfg = PenaltyConfig::for_data(r(7, 5), 80, 4, lattice, 4);
    CHECK(c.weighted_error(cfg.w_plus, cfg.w_minus) == objective(m, aggregate(data), cfg).weighted_error);
    // Subsets add up.
    std::vector<std::size_t> first(40);
    std::iota(first.begin(), first.end(), 0);
    std::vector<std::size_t> second(40);
    std::iota(second.begin(), second.end(), 40);
    auto sum = confusion(m, data, first);
    sum += confusion(m, data, second);
    CHECK(sum == c);
  }
  const auto wrong = ScoringSystem::from_dense(0, std::vector<int>(3, 0), {"a", "b", "c"});
  CHECK_THROWS_AS(confusion(wrong, data), DataError);
}

TEST_CASE("percent renders one decimal") {
  CHECK(percent(r(766, 1000)) == "76.6%");
  CHECK(percent(r(445, 1000)) == "44.5%");
  CHECK(percent(r(1)) == "100.0%");
  CHECK(percent(r(0)) == "0.0%");
  CHECK(percent(r(2, 3)) == "66.7%");
}

TEST_CASE("auc: worked values, order invariance and the trapezoid oracle") {
  CHECK(auc(std::vector<RocCoordinate>{}) == r(1, 2));
  CHECK(auc(std::vector<RocCoordinate>{{r(0), r(1)}}) == 1);
  CHECK(auc(std::vector<RocCoordinate>{{r(1, 2), r(1)}}) == r(3, 4));
  CHECK_THROWS_AS(auc(std::vector<RocCoordinate>{{r(3, 2), r(1)}}), ConfigError);
  CHECK_THROWS_AS(auc(std::vector<RocCoordinate>{{r(0), r(-1)}}), ConfigError);

  SeededRng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RocCoordinate> pts;
    std::vector<std::pair<double, double>> doubles;
    for (std::size_t k = 0; k < 1 + rng.below(12); ++k) {
      const auto f = static_cast<std::int64_t>(rng.below(21));
      const auto t = static_cast<std::int64_t>(rng.below(21));
      pts.emplace_back(r(f, 20), r(t, 20));
      doubles.emplace_back(f / 20.0, t / 20.0);
    }
    const Rational area = auc(pts);
    CHECK(area >= 0);
    CHECK(area <= 1);
    CHECK(to_double(area) == doctest::Approx(trapezoid(doubles)).epsilon(1e-12));
    rng.shuffle(std::span(pts));
    CHECK(auc(pts) == area);
  }
}

TEST_CASE("roc curve serializations") {
  const auto curve = RocCurve::from_points({{r(1), r(1, 4), r(3, 4), "wplus=1"}, {r(3, 2), r(1, 2), r(9, 10), "b"}});
  CHECK(curve.auc == auc(std::vector<RocCoordinate>{{r(1, 4), r(3, 4)}, {r(1, 2), r(9, 10)}}));
  const auto j = nlohmann::json::parse(curve.to_json());
  CHECK(j.at("points").size() == 2);
  CHECK(j.at("points")[0].at("model_id") == "wplus=1");
  const auto csv = curve.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto svg = curve.to_svg("test");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 2);
}

TEST_CASE("calibration: trivial model, partition and pooled rate") {
  const auto d = synth_generate(recidivism_like_spec(), 5000, 8);
  const auto trivial = ScoringSystem::from_dense(1, std::vector<int>(48, 0), d.feature_names());
  const auto table = calibration(trivial, d);
  REQUIRE(table.bins.size() == 1);
  CHECK(table.bins[0].count == 5000);
  CHECK(table.bins[0].rate() == make_rational(static_cast<std::int64_t>(d.num_positive()), 5000));
  CHECK(std::abs(to_double(table.bins[0].rate()) - 0.59) <= 0.02);
  CHECK_THROWS_AS(calibration(trivial, d, 0), ConfigError);

  SeededRng rng(53);
  const auto lattice = LatticeSpec::uniform(48, 3, 5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> dense(48, 0);
    for (int k = 0; k < 6; ++k) dense[rng.below(48)] = static_cast<int>(rng.below(7)) - 3;
    const auto m = ScoringSystem::from_dense(0, dense, d.feature_names());
    for (auto binning : {Binning::kEqualFrequency, Binning::kEqualWidth}) {
      const auto t = calibration(m, d, 1 + static_cast<int>(rng.below(12)), binning);
      CHECK(t.total() == 5000);
      std::int64_t positives = 0;
      for (std::size_t b = 0; b < t.bins.size(); ++b) {
        CHECK(t.bins[b].count > 0);
        CHECK(t.bins[b].min_score <= t.bins[b].max_score);
        if (b > 0) CHECK(t.bins[b - 1].max_score < t.bins[b].min_score);
        CHECK(t.bins[b].rate() >= 0);
        CHECK(t.bins[b].rate() <= 1);
        positives += t.bins[b].positives;
      }
      CHECK(static_cast<int>(t.bins.size()) <= t.requested_bins);
      // Count-weighted bin rates recover the overall rate.
      CHECK(make_rational(positives, t.total()) == make_rational(static_cast<std::int64_t>(d.num_positive()), 5000));
      CHECK(nlohmann::json::parse(t.to_json()).at("bins").size() == t.bins.size());
    }
  }
}

TEST_CASE("calibration: monotone truth gives monotone bins") {
  SynthSpec spec{{"a", "b", "c"}, {0.5, 0.5, 0.5}, {1.5, 1.0, 0.5}, -1.5};
  const auto d = synth_generate(spec, 10000, 21);
  const auto m = ScoringSystem::from_dense(0, std::vector<int>{3, 2, 1}, d.feature_names());
  const auto t = calibration(m, d, 10);
  REQUIRE(t.bins.size() >= 3);
  for (std::size_t b = 1; b < t.bins.size(); ++b) CHECK(t.bins[b].rate() >= t.bins[b - 1].rate());
}

TEST_CASE("pick at decision point") {
  const std::vector<OperatingPoint> pts{
      {r(1), r(4, 10), r(7, 10), r(3, 10), "a"},
      {r(6, 5), r(45, 100), r(76, 100), r(2, 10), "b"},
      {r(3, 2), r(7, 10), r(95, 100), r(4, 10), "c"},
      {r(1, 2), r(15, 100), r(40, 100), r(5, 10), "d"},
  };
  CHECK(pick_at_decision_point(pts, r(1, 2), PickCriterion::kMaxTpr) == 1u);
  CHECK(pick_at_decision_point(pts, r(1, 5), PickCriterion::kMaxTpr) == 3u);
  CHECK(pick_at_decision_point(pts, r(1), PickCriterion::kMinWeightedError) == 1u);
  CHECK_FALSE(pick_at_decision_point(pts, r(1, 10), PickCriterion::kMaxTpr).has_value());

  // Equal TPR: lower FPR wins, then smaller W+.
  const std::vector<OperatingPoint> ties{
      {r(3, 2), r(3, 10), r(8, 10), r(1, 10), "x"},
      {r(1), r(2, 10), r(8, 10), r(1, 10), "y"},
      {r(1, 2), r(2, 10), r(8, 10), r(1, 10), "z"},
  };
  CHECK(pick_at_decision_point(ties, r(1), PickCriterion::kMaxTpr) == 2u);
  CHECK(pick_at_decision_point(ties, r(1), PickCriterion::kMinWeightedError) == 2u);
}

TEST_CASE("sweep protocol grids") {
  const auto balanced = SweepProtocol::preset("balanced");
  CHECK(balanced.w_plus_grid.size() == 19);
  CHECK(balanced.w_plus_grid.front() == r(1, 10));
  CHECK(balanced.w_plus_grid.back() == r(19, 10));
  const auto imbalanced = SweepProtocol::preset("imbalanced");
  CHECK(imbalanced.w_plus_grid.size() == 37);
  CHECK(imbalanced.w_plus_grid.front() == r(1815, 1000));
  CHECK(imbalanced.w_plus_grid.back() == r(1995, 1000));
  const auto extreme = SweepProtocol::preset("extreme");
  CHECK(extreme.w_plus_grid.size() == 21);
  CHECK(extreme.w_plus_grid[1] == r(1976, 1000));
  CHECK(SweepProtocol::uniform(3).w_plus_grid == std::vector<Rational>{r(1, 2), r(1), r(3, 2)});
  CHECK_THROWS_AS(SweepProtocol::preset("steep"), ConfigError);
  SweepProtocol empty;
  CHECK_THROWS_AS(empty.validate(), ConfigError);
  SweepProtocol outside;
  outside.w_plus_grid = {r(5, 2)};
  CHECK_THROWS_AS(outside.validate(), ConfigError);
}

TEST_CASE("sweep: endpoints, model selection bookkeeping and thread independence") {
  SynthSpec spec{{"a", "b", "c"}, {0.4, 0.5, 0.3}, {2.0, -1.5, 1.0}, 0.0};
  const auto data = synth_generate(spec, 150, 61);
  const auto folds = make_folds(data, 5);
  SweepProtocol protocol;
  protocol.w_plus_grid = {r(0), r(1), r(2)};
  protocol.pool_size = 20;
  protocol.max_terms = 3;
  const auto lattice = LatticeSpec::uniform(3, 3, 10);
  SweepOptions options;
  options.solve.time_limit_seconds = 10;
  const auto result = sweep(data, folds, protocol, lattice, options);
  REQUIRE(result.points.size() == 3);
  for (const auto& p : result.points) REQUIRE(p.status == PointStatus::kOk);

  const auto& zero = result.points[0];
  CHECK(zero.test.fpr() == 0);
  CHECK(zero.test.tpr() == 0);
  const auto& two = result.points[2];
  CHECK(two.test.fpr() == 1);
  CHECK(two.test.tpr() == 1);
  CHECK(two.model.terms.empty());

  const auto test_rows = folds.test_rows();
  for (const auto& p : result.points) {
    CHECK(p.mean_validation_error.size() == 3);
    CHECK(p.chosen_terms >= 1);
    CHECK(p.chosen_terms <= 3);
    const auto best = *std::min_element(p.mean_validation_error.begin(), p.mean_validation_error.end());
    CHECK(p.mean_validation_error[p.chosen_terms - 1] == best);
    for (int k = 1; k < p.chosen_terms; ++k) CHECK(p.mean_validation_error[k - 1] > best);
    CHECK(p.model.l0() <= p.chosen_terms);
    CHECK(p.test == confusion(p.model, data, test_rows));
    CHECK(p.validation.positives() + p.validation.negatives() ==
          static_cast<std::int64_t>(folds.training_rows().size()));
  }
  CHECK(result.test_curve.points.size() == 3);
  CHECK(result.validation_points().size() == 3);

  SweepOptions threaded = options;
  threaded.threads = 3;
  const auto again = sweep(data, folds, protocol, lattice, threaded);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.points[i].model == result.points[i].model);
    CHECK(again.points[i].mean_validation_error == result.points[i].mean_validation_error);
  }
  CHECK(again.test_curve.auc == result.test_curve.auc);
}
