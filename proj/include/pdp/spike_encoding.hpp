#pragma once

// Per-defender spike representation of a scenario. Zones re-index the
// perimeter around one defender; each zone owns one defender channel and one
// intruder channel carrying at most one spike.

#include <cstdint>
#include <optional>
#include <vector>

#include "pdp/world.hpp"

namespace pdp {

// One bit per zone: 1 = the defender is assigned to (or predicted for) it.
using LabelVector = std::vector<std::uint8_t>;

struct ZoneMap {
  SegmentId defender_segment;
  int m = 0;  // observed zones
  int n = 0;  // perimeter segments
  std::vector<SegmentId> zone_to_segment;  // zone k (1-based) at [k - 1]

  // ceil((m + 1) / 2), the zone holding the defender itself.
  int central_zone() const { return m / 2 + 1; }

  SegmentId segment_of(int zone) const { return zone_to_segment.at(zone - 1); }

  // 1-based zone covering segment s, or nullopt when s is unobserved.
  std::optional<int> zone_of(SegmentId s) const;
};

// Zone k maps to segment ((i - c + k - 1) mod n) + 1 for a defender in s_i
// with central zone c. Throws DomainError unless 1 <= m <= n.
ZoneMap zones_of(SegmentId defender_segment, int m, int n);

struct Spike {
  int channel = 0;  // 0-based: [0, m) defenders, [m, 2m) intruders
  double time = 0.0;
};

class SpikePattern {
 public:
  SpikePattern() = default;
  SpikePattern(int m, double interval);

  int num_zones() const { return m_; }
  int num_channels() const { return 2 * m_; }
  double interval() const { return interval_; }

  const std::optional<double>& at(int channel) const { return channels_.at(channel); }
  void set(int channel, double time);
  void clear(int channel) { channels_.at(channel).reset(); }

  static int defender_channel(int zone) { return zone - 1; }
  int intruder_channel(int zone) const { return m_ + zone - 1; }

  // Spiking channels ordered by (time, channel).
  std::vector<Spike> spikes() const;
  bool silent() const;

  friend bool operator==(const SpikePattern&, const SpikePattern&) = default;

 private:
  int m_ = 0;
  double interval_ = 0.0;
  std::vector<std::optional<double>> channels_;
};

// Encodes defender d's view of s. Defender channels fire at 0, intruder
// channels at t_a * interval / horizon (clipped just below the interval end).
// Two intruders in one zone cannot occur in generated data; the earliest
// arrival wins if it does.
SpikePattern encode(const Scenario& s, const Defender& d, const ZoneMap& zones, double interval,
                    double horizon);

}  // namespace pdp
