#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pdp/errors.hpp"
#include "pdp/world.hpp"

using namespace pdp;
using pdp::testing::defender;
using pdp::testing::intruder;

TEST_CASE("arc distance examples") {
  CHECK(arc_distance(SegmentId(5), SegmentId(5), 36) == 0);
  CHECK(arc_distance(SegmentId(1), SegmentId(19), 36) == 18);
  CHECK(arc_distance(SegmentId(32), SegmentId(10), 36) == 14);
  CHECK_THROWS_AS(arc_distance(SegmentId(0), SegmentId(3), 36), DomainError);
  CHECK_THROWS_AS(arc_distance(SegmentId(3), SegmentId(37), 36), DomainError);
}

TEST_CASE("arc distance is symmetric and obeys the triangle inequality") {
  const int n = 12;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      CHECK(arc_distance(SegmentId(a), SegmentId(b), n) ==
            arc_distance(SegmentId(b), SegmentId(a), n));
      for (int c = 1; c <= n; ++c) {
        CHECK(arc_distance(SegmentId(a), SegmentId(b), n) <=
              arc_distance(SegmentId(a), SegmentId(c), n) +
                  arc_distance(SegmentId(c), SegmentId(b), n));
      }
    }
  }
}

TEST_CASE("segments wrap cyclically") {
  CHECK(wrap_segment(0, 36).index() == 36);
  CHECK(wrap_segment(-1, 36).index() == 35);
  CHECK(wrap_segment(37, 36).index() == 1);
  CHECK(shift(SegmentId(35), 3, 36).index() == 2);
}

TEST_CASE("arrival time") {
  CHECK(arrival_time(Intruder{1, SegmentId(1), 1.0, 0.5}) == 0.0);
  CHECK(arrival_time(Intruder{1, SegmentId(1), 2.075, 0.5}) == doctest::Approx(2.15).epsilon(1e-12));
  CHECK(arrival_time(Intruder{1, SegmentId(1), 3.0, 1.0}) == 2.0);
  CHECK_THROWS_AS(arrival_time(Intruder{1, SegmentId(1), 3.0, 0.0}), DomainError);
}

TEST_CASE("scenario validation") {
  Scenario s;
  s.defenders = {defender(1, 3)};
  s.intruders = {intruder(1, 4, 2.0), intruder(2, 4, 3.0)};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.intruders[1].segment = SegmentId(5);
  CHECK_NOTHROW(s.validate());
  s.intruders[1].radius = 1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("parked defender captures the intruder in its segment") {
  Scenario s;
  s.defenders = {defender(1, 7)};
  s.intruders = {intruder(1, 7, 3.0)};
  const auto r = simulate_episode(s, {});
  REQUIRE(r.captured.size() == 1);
  CHECK(r.captured[0].defender_id == 1);
  CHECK(r.success_percentage == 100.0);
}

TEST_CASE("no defenders: everything escapes") {
  Scenario s;
  s.intruders = {intruder(1, 7, 3.0), intruder(2, 9, 1.0)};
  const auto r = simulate_episode(s, {});
  CHECK(r.escaped.size() == 2);
  CHECK(r.success_percentage == 0.0);
}

TEST_CASE("hand-built case: the one unreachable intruder escapes") {
  // One hop takes (2 pi / 36) / 0.5 = 0.349 s.
  Scenario s;
  s.defenders = {defender(1, 1, 0.5), defender(2, 19, 0.5)};
  s.intruders = {intruder(1, 3, 1.0),    // 2 hops from d1: 0.70 s, fine
                 intruder(2, 22, 2.0),   // 3 hops from d2: 1.05 s, fine
                 intruder(3, 10, 1.0)};  // 9 hops from either: 3.1 s, too far
  const std::vector<Trajectory> plan = {{{SegmentId(3), 1.0}}, {{SegmentId(22), 2.0}}};
  const auto r = simulate_episode(s, plan);
  REQUIRE(r.escaped.size() == 1);
  CHECK(r.escaped[0].intruder_id == 3);
  CHECK(r.success_percentage == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("infeasible leg names defender and leg") {
  Scenario s;
  s.defenders = {defender(4, 1, 0.5)};
  s.intruders = {intruder(1, 10, 1.0)};
  const std::vector<Trajectory> plan = {{{SegmentId(2), 1.0}, {SegmentId(10), 1.5}}};
  try {
    simulate_episode(s, plan);
    FAIL("expected a feasibility error");
  } catch (const FeasibilityError& e) {
    CHECK(e.defender_id == 4);
    CHECK(e.leg == 1);
  }
}

TEST_CASE("arrival exactly at the deadline counts as capture") {
  Scenario s;
  const double hop = travel_time(1, 36, 0.5);
  s.defenders = {defender(1, 1, 0.5)};
  s.intruders = {intruder(1, 4, 3 * hop)};
  const std::vector<Trajectory> plan = {{{SegmentId(4), 3 * hop}}};
  CHECK(simulate_episode(s, plan).captured.size() == 1);
}

TEST_CASE("a defender in transit occupies only the centers it crosses") {
  const Defender d = defender(1, 1, 0.5);
  const double hop = travel_time(1, 36, 0.5);
  const Trajectory t = {{SegmentId(5), 10.0}};
  CHECK(occupied_segment(d, t, 36, 0.0) == SegmentId(1));
  CHECK(occupied_segment(d, t, 36, 2 * hop) == SegmentId(3));
  CHECK_FALSE(occupied_segment(d, t, 36, 2.5 * hop).has_value());
  CHECK(occupied_segment(d, t, 36, 9.0) == SegmentId(5));
  CHECK(occupied_segment(d, t, 36, 11.0) == SegmentId(5));
}

TEST_CASE("rotation preserves capture and escape sets") {
  Rng rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario s = pdp::testing::random_instance(rng, 3, 5);
    const std::vector<Trajectory> stay;
    const auto base = simulate_episode(s, stay);
    const int k = static_cast<int>(rng.below(36));
    const auto rot = simulate_episode(rotate(s, k), stay);
    REQUIRE(base.captured.size() == rot.captured.size());
    for (std::size_t c = 0; c < base.captured.size(); ++c) {
      CHECK(rot.captured[c].intruder_id == base.captured[c].intruder_id);
      CHECK(rot.captured[c].segment == shift(base.captured[c].segment, k, 36));
    }
  }
}

TEST_CASE("scenario record round trip") {
  Rng rng(9, 0);
  const Scenario s = pdp::testing::random_instance(rng, 4, 6);
  const Scenario back = scenario_from_record(to_record(s));
  CHECK(to_record(back) == to_record(s));
  REQUIRE(back.intruders.size() == s.intruders.size());
  for (std::size_t k = 0; k < s.intruders.size(); ++k) {
    CHECK(back.intruders[k].radius == s.intruders[k].radius);
  }
  CHECK_THROWS_AS(scenario_from_record("{\"n\": 3}"), IoError);
}
