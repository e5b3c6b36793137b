#include "pdp/spike_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdp/errors.hpp"

namespace pdp {

std::optional<int> ZoneMap::zone_of(SegmentId s) const {
  // Offset of s from the first zone, walking anticlockwise.
  const int first = zone_to_segment.front().index();
  const int offset = ((s.index() - first) % n + n) % n;
  if (offset < m) return offset + 1;
  return std::nullopt;
}

ZoneMap zones_of(SegmentId defender_segment, int m, int n) {
  if (n < 1 || m < 1 || m > n) {
    throw DomainError("zones_of: need 1 <= m <= n, got m=" + std::to_string(m) +
                      " n=" + std::to_string(n));
  }
  if (defender_segment.index() < 1 || defender_segment.index() > n) {
    throw DomainError("zones_of: defender segment out of range");
  }
  ZoneMap map;
  map.defender_segment = defender_segment;
  map.m = m;
  map.n = n;
  const int c = map.central_zone();
  map.zone_to_segment.reserve(m);
  for (int k = 1; k <= m; ++k) {
    map.zone_to_segment.push_back(wrap_segment(defender_segment.index() - c + k, n));
  }
  return map;
}

SpikePattern::SpikePattern(int m, double interval)
    : m_(m), interval_(interval), channels_(2 * static_cast<std::size_t>(m)) {}

void SpikePattern::set(int channel, double time) {
  if (!(time >= 0.0 && time < interval_)) {
    throw DomainError("spike time " + std::to_string(time) + " outside [0, interval)");
  }
  channels_.at(channel) = time;
}

std::vector<Spike> SpikePattern::spikes() const {
  std::vector<Spike> out;
  for (int c = 0; c < num_channels(); ++c) {
    if (channels_[c]) out.push_back({c, *channels_[c]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Spike& a, const Spike& b) { return a.time < b.time; });
  return out;
}

bool SpikePattern::silent() const {
  return std::none_of(channels_.begin(), channels_.end(), [](const auto& c) { return c.has_value(); });
}

SpikePattern encode(const Scenario& s, const Defender& d, const ZoneMap& zones, double interval,
                    double horizon) {
  if (!(horizon > 0.0) || !(interval > 0.0)) throw DomainError("encode: non-positive time scale");
  SpikePattern pattern(zones.m, interval);
  const double latest = std::nextafter(interval, 0.0);
  for (const Defender& other : s.defenders) {
    if (auto z = zones.zone_of(other.segment)) pattern.set(SpikePattern::defender_channel(*z), 0.0);
  }
  // The encoding defender always sees itself in the central zone.
  if (auto z = zones.zone_of(d.segment)) pattern.set(SpikePattern::defender_channel(*z), 0.0);
  for (const Intruder& i : s.intruders) {
    auto z = zones.zone_of(i.segment);
    if (!z) continue;
    const double t = std::clamp(i.arrival_time() * interval / horizon, 0.0, latest);
    const int ch = pattern.intruder_channel(*z);
    if (!pattern.at(ch) || t < *pattern.at(ch)) pattern.set(ch, t);
  }
  if (pattern.silent()) throw DegenerateError("encode produced a silent pattern");
  return pattern;
}

}  // namespace pdp
