#include "doctest.h"
#include "helpers.hpp"
#include "pdp/errors.hpp"
#include "pdp/spike_encoding.hpp"

using namespace pdp;
using pdp::testing::defender;
using pdp::testing::intruder;

TEST_CASE("zones around a defender in segment 3, m = 15") {
  const auto z = zones_of(SegmentId(3), 15, 36);
  CHECK(z.central_zone() == 8);
  CHECK(z.segment_of(1) == SegmentId(32));
  CHECK(z.segment_of(8) == SegmentId(3));
  CHECK(z.segment_of(15) == SegmentId(10));
  CHECK(z.zone_of(SegmentId(36)) == 5);
  CHECK_FALSE(z.zone_of(SegmentId(20)).has_value());
}

TEST_CASE("full observation covers every segment once") {
  const auto z = zones_of(SegmentId(17), 36, 36);
  CHECK(z.central_zone() == 19);
  CHECK(z.segment_of(19) == SegmentId(17));
  for (int s = 1; s <= 36; ++s) {
    const auto k = z.zone_of(SegmentId(s));
    REQUIRE(k.has_value());
    CHECK(z.segment_of(*k) == SegmentId(s));
  }
}

TEST_CASE("zone map errors") {
  CHECK_THROWS_AS(zones_of(SegmentId(1), 37, 36), DomainError);
  CHECK_THROWS_AS(zones_of(SegmentId(1), 0, 36), DomainError);
}

TEST_CASE("encoding: defenders at zero, intruders at scaled arrival") {
  Scenario s;
  s.defenders = {defender(1, 3), defender(2, 5), defender(3, 20)};
  s.intruders = {intruder(1, 3, 2.0), intruder(2, 33, 6.0), intruder(3, 18, 1.0)};
  const auto z = zones_of(SegmentId(3), 15, 36);
  const auto p = encode(s, s.defenders[0], z, 16.0, 8.0);
  CHECK(p.at(SpikePattern::defender_channel(8)) == 0.0);
  CHECK(p.at(SpikePattern::defender_channel(10)) == 0.0);
  CHECK(p.at(p.intruder_channel(8)) == 4.0);
  CHECK(p.at(p.intruder_channel(2)) == 12.0);
  int spiking = 0;
  for (int c = 0; c < p.num_channels(); ++c) spiking += p.at(c).has_value();
  CHECK(spiking == 4);  // defender 3 and intruder 3 sit outside the view
}

TEST_CASE("arrival at the horizon lands just inside the interval") {
  Scenario s;
  s.defenders = {defender(1, 1)};
  s.intruders = {intruder(1, 2, 8.0)};
  const auto p = encode(s, s.defenders[0], zones_of(SegmentId(1), 5, 36), 8.0, 8.0);
  const auto t = p.at(p.intruder_channel(4));
  REQUIRE(t.has_value());
  CHECK(*t < 8.0);
  CHECK(*t > 7.999999);
}

TEST_CASE("spike list is ordered by time then channel") {
  SpikePattern p(3, 8.0);
  p.set(4, 1.0);
  p.set(2, 0.0);
  p.set(0, 0.0);
  p.set(3, 0.5);
  const auto s = p.spikes();
  REQUIRE(s.size() == 4);
  CHECK(s[0].channel == 0);
  CHECK(s[1].channel == 2);
  CHECK(s[2].channel == 3);
  CHECK(s[3].channel == 4);
  CHECK_THROWS_AS(p.set(1, 8.0), DomainError);
}

TEST_CASE("encoding is rotation invariant, bit for bit") {
  Rng rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Scenario s = pdp::testing::random_instance(rng, 5, 1 + static_cast<int>(rng.below(10)));
    const int k = static_cast<int>(rng.below(36));
    const Scenario r = rotate(s, k);
    for (int m : {15, 36}) {
      for (std::size_t d = 0; d < s.defenders.size(); ++d) {
        const auto a = encode(s, s.defenders[d], zones_of(s.defenders[d].segment, m, 36), 8.0, 8.0);
        const auto b = encode(r, r.defenders[d], zones_of(r.defenders[d].segment, m, 36), 8.0, 8.0);
        CHECK(a == b);
      }
    }
  }
}
