#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pdp/evaluation.hpp"

using namespace pdp;
using pdp::testing::defender;
using pdp::testing::intruder;

TEST_CASE("zone metrics match a direct count") {
  Rng rng(6, 0);
  std::vector<LabelVector> pred, truth;
  for (int k = 0; k < 300; ++k) {
    LabelVector p(7), t(7);
    for (int j = 0; j < 7; ++j) {
      p[j] = rng.uniform() < 0.4;
      t[j] = rng.uniform() < 0.3 + 0.05 * j;
    }
    pred.push_back(p);
    truth.push_back(t);
  }
  const auto z = zone_metrics(pred, truth);
  for (int j = 0; j < 7; ++j) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
      tp += pred[k][j] && truth[k][j];
      fp += pred[k][j] && !truth[k][j];
      fn += !pred[k][j] && truth[k][j];
    }
    const double p = tp / (tp + fp);
    const double r = tp / (tp + fn);
    CHECK(z.precision[j] == doctest::Approx(p));
    CHECK(z.recall[j] == doctest::Approx(r));
    CHECK(z.f1[j] == doctest::Approx(2 * p * r / (p + r)));
  }
}

TEST_CASE("zone metrics of a zone never predicted nor present") {
  const std::vector<LabelVector> p = {{0, 1}}, t = {{0, 1}};
  const auto z = zone_metrics(p, t);
  CHECK(z.f1[0] == 0.0);
  CHECK(z.f1[1] == 1.0);
  const std::vector<LabelVector> short_one = {{0}};
  CHECK_THROWS_AS(zone_metrics(short_one, t), ShapeError);
}

TEST_CASE("success percentage and learning efficiency") {
  CaptureReport r;
  r.captured.resize(17);
  r.escaped.resize(3);
  CHECK(success_percentage(r) == 85.0);
  SuccessSummary e, d;
  e.mean = 85.04;
  d.mean = 82.88;
  CHECK(learning_efficiency(d, e) == doctest::Approx(97.46).epsilon(1e-4));
  e.mean = 85.34;
  d.mean = 79.49;
  CHECK(learning_efficiency(d, e) == doctest::Approx(93.14).epsilon(1e-4));
  e.mean = 0.0;
  CHECK_THROWS_AS(learning_efficiency(d, e), DomainError);
}

TEST_CASE("summaries skip runs without intruders and use the population std") {
  std::vector<CaptureReport> runs(4);
  runs[0].captured.resize(1);
  runs[1].escaped.resize(1);
  runs[2].captured.resize(1);
  runs[2].escaped.resize(1);
  const auto s = summarize(runs, "expert", "full");
  CHECK(s.runs == 3);
  CHECK(s.mean == doctest::Approx(50.0));
  CHECK(s.std == doctest::Approx(std::sqrt((2500.0 + 2500.0 + 0.0) / 3.0)));
}

TEST_CASE("sectors split the perimeter evenly, boundary centers go low") {
  std::vector<int> count(5, 0);
  for (int s = 1; s <= 36; ++s) ++count[sector_of(SegmentId(s), 5, 36)];
  CHECK(count == std::vector<int>{7, 7, 8, 7, 7});
  CHECK(sector_of(SegmentId(3), 2, 5) == 0);  // center 2.5 sits on the boundary
  CHECK(sector_of(SegmentId(4), 2, 5) == 1);
  CHECK(sector_home(0, 4, 36) == SegmentId(5));
}

TEST_CASE("naive policy is always feasible") {
  Rng rng(16, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Scenario s = pdp::testing::random_instance(rng, 5, 1 + static_cast<int>(rng.below(8)));
    CHECK_NOTHROW(check_feasible(s, naive_trajectories(s)));
  }
}

TEST_CASE("naive: defenders take sectors in segment order") {
  Scenario s;
  s.defenders = {defender(1, 30, 1.0), defender(2, 2, 1.0)};
  s.intruders = {intruder(1, 10, 7.0)};
  const auto t = naive_trajectories(s);
  // Defender 2 holds the lowest segment, so sector 0 (segments 1..18).
  REQUIRE_FALSE(t[1].empty());
  CHECK(t[1].front().segment == sector_home(0, 2, 36));
  CHECK(t[1].back().segment == SegmentId(10));
  CHECK(t[0].size() == 1);
}

TEST_CASE("expert chains capture exactly the non-pruned intruders") {
  DatasetConfig c;
  c.runs = 200;
  c.seed = 12;
  for (int id = 0; id < c.runs; ++id) {
    const Scenario s = generate_scenario(c, id);
    const auto sol = prune_infeasible(s, default_kappa(36));
    const auto r = simulate_episode(s, chains_to_trajectories(sol));
    CHECK(r.captured.size() == sol.tasks.size());
    CHECK(r.escaped.size() == sol.pruned.size());
  }
}

TEST_CASE("spearman") {
  const std::vector<double> x = {1, 2, 3, 4}, y = {10, 20, 25, 40}, z = {4, 3, 2, 1};
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  CHECK(spearman(x, z) == doctest::Approx(-1.0));
}

TEST_CASE("report writers") {
  SuccessSummary a;
  a.mode = "naive";
  a.observation = "full";
  a.mean = 64.9;
  a.std = 1.0;
  a.runs = 900;
  std::ostringstream out;
  const std::vector<SuccessSummary> rows = {a};
  write_table2(out, rows, 7);
  CHECK(out.str() ==
        "# seed 7\nmethod\tobservation\tmean\tstd\tthree_sigma\truns\n"
        "naive\tfull\t64.9000\t1.0000\t3.0000\t900\n");
}
