#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "pdp/errors.hpp"
#include "pdp/expert.hpp"
#include "pdp/lsap.hpp"

using namespace pdp;
using pdp::testing::defender;
using pdp::testing::intruder;

TEST_CASE("lsap on a small square matrix") {
  AssignmentCosts c(3, 3);
  const int v[3][3] = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) c.at(r, k) = v[r][k];
  }
  const auto res = solve_lsap(c);
  CHECK(res.total == 5);
}

TEST_CASE("lsap respects forbidden cells and reports impossible columns") {
  AssignmentCosts c(2, 2);
  c.at(0, 0) = 1;
  c.at(1, 0) = 1;
  const auto check = [&] { return solve_lsap(c); };
  CHECK_THROWS_AS(check(), InfeasibleAssignmentError);
  c.at(1, 1) = 7;
  const auto res = solve_lsap(c);
  CHECK(res.row_of_col[1] == 1);
  CHECK(res.total == 8);
}

TEST_CASE("cost matrix entries") {
  Scenario s;
  // Co-located, arriving almost now.
  s.defenders = {defender(1, 5, 0.47)};
  s.intruders = {intruder(1, 5, 0.01), intruder(2, 14, 1.0), intruder(3, 30, 0.5)};
  const auto m = build_cost_matrix(s, 360);
  REQUIRE(m.rows() == 1 + 3 - 1);
  REQUIRE(m.cols() == 3);
  // Sorted tasks: (0.01, s5), (0.5, s30), (1.0, s14).
  CHECK(*m.at(0, 0) == 0);
  // 9 hops in 1 s at 0.47 rad/s: 1.57 rad > 0.47 rad.
  CHECK(*m.at(0, 2) == 360);
  // Successor rows only point forward in time.
  CHECK_FALSE(m.at(2, 0).has_value());
  CHECK_FALSE(m.at(1, 0).has_value());
  CHECK(m.at(1, 1).has_value());
}

TEST_CASE("one defender, one reachable task") {
  Scenario s;
  s.defenders = {defender(1, 1)};
  s.intruders = {intruder(1, 3, 5.0)};
  const auto sol = solve_assignment(build_cost_matrix(s, 360));
  REQUIRE(sol.chains[0].size() == 1);
  CHECK(sol.total_cost == 2);
}

TEST_CASE("forced matching when all but one entry per column is kappa") {
  Scenario s;
  s.defenders = {defender(1, 1, 0.47), defender(2, 19, 0.47)};
  s.intruders = {intruder(1, 2, 0.8), intruder(2, 20, 0.8)};
  const auto sol = solve_assignment(build_cost_matrix(s, 360));
  CHECK(sol.total_cost == 2);
  CHECK(sol.chains[0].front().intruder_id == 1);
  CHECK(sol.chains[1].front().intruder_id == 2);
}

TEST_CASE("solver cost matches brute force on small instances") {
  Rng rng(2024, 0);
  for (int trial = 0; trial < 150; ++trial) {
    const int N = 1 + static_cast<int>(rng.below(3));
    const int M = 1 + static_cast<int>(rng.below(5));
    const Scenario s = pdp::testing::random_instance(rng, N, M);
    const auto sol = solve_assignment(build_cost_matrix(s, 360));
    CHECK(sol.total_cost == pdp::testing::brute_force_cost(s, 360));
  }
}

TEST_CASE("every task sits in exactly one chain, in time order") {
  Rng rng(77, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = pdp::testing::random_instance(rng, 5, 1 + static_cast<int>(rng.below(8)));
    const auto sol = prune_infeasible(s, 360);
    std::multiset<int> seen;
    for (const auto& chain : sol.chains) {
      for (std::size_t k = 0; k < chain.size(); ++k) {
        seen.insert(chain[k].intruder_id);
        if (k > 0) CHECK(chain[k].arrival_time >= chain[k - 1].arrival_time);
      }
    }
    CHECK(seen.size() == sol.tasks.size());
    CHECK(std::set<int>(seen.begin(), seen.end()).size() == seen.size());
    CHECK(sol.tasks.size() + sol.pruned.size() == s.intruders.size());
    CHECK(sol.worst_entry < 360);
  }
}

TEST_CASE("pruning: simultaneous opposite tasks for one defender") {
  Scenario s;
  s.defenders = {defender(1, 1, 0.47)};
  s.intruders = {intruder(1, 2, 2.0), intruder(2, 20, 2.0)};
  const auto sol = prune_infeasible(s, 360);
  CHECK(sol.pruned.size() == 1);
  CHECK(sol.tasks.size() == 1);
}

TEST_CASE("pruning leaves reachable scenarios alone") {
  Scenario s;
  s.defenders = {defender(1, 1), defender(2, 10)};
  s.intruders = {intruder(1, 2, 3.0), intruder(2, 11, 4.0)};
  const auto pruned = prune_infeasible(s, 360);
  const auto plain = solve_assignment(build_cost_matrix(s, 360));
  CHECK(pruned.pruned.empty());
  CHECK(pruned.total_cost == plain.total_cost);
}

TEST_CASE("no intruders and no defenders") {
  Scenario s;
  s.defenders = {defender(1, 1)};
  CHECK(prune_infeasible(s, 360).chains[0].empty());
  Scenario t;
  t.intruders = {intruder(1, 3, 2.0)};
  CHECK(prune_infeasible(t, 360).pruned.size() == 1);
}

TEST_CASE("labels: empty chain, own segment, union over the team") {
  Scenario s;
  s.defenders = {defender(1, 3), defender(2, 20)};
  s.intruders = {intruder(1, 3, 2.0)};
  const auto sol = prune_infeasible(s, 360);
  const auto z1 = zones_of(SegmentId(3), 15, 36);
  const auto z2 = zones_of(SegmentId(20), 15, 36);
  const auto l1 = labels_from_assignment(sol, s, s.defenders[0], z1);
  const auto l2 = labels_from_assignment(sol, s, s.defenders[1], z2);
  CHECK(l1[7] == 1);
  CHECK(std::count(l1.begin(), l1.end(), 1) == 1);
  CHECK(std::count(l2.begin(), l2.end(), 1) == 0);

  Rng rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario r = pdp::testing::random_instance(rng, 5, 6);
    const auto so = prune_infeasible(r, 360);
    std::set<int> labeled, expected;
    for (std::size_t d = 0; d < r.defenders.size(); ++d) {
      const auto z = zones_of(r.defenders[d].segment, 15, 36);
      const auto l = labels_from_assignment(so, r, r.defenders[d], z);
      for (int k = 1; k <= 15; ++k) {
        if (l[k - 1]) labeled.insert(z.segment_of(k).index());
      }
      for (const Task& t : so.chains[d]) {
        if (z.zone_of(t.segment)) expected.insert(t.segment.index());
      }
    }
    CHECK(labeled == expected);
  }
}

TEST_CASE("plan dump format") {
  Scenario s;
  s.defenders = {defender(1, 1)};
  s.intruders = {intruder(1, 2, 3.0)};
  const auto sol = prune_infeasible(s, 360);
  CHECK(format_solution(s, sol) == "defender 1: (2, 3.000000)\npruned:\n");
}
