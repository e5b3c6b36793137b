#include "pdp/consensus.hpp"

#include <algorithm>
#include <map>

#include "pdp/errors.hpp"

namespace pdp {

std::vector<std::uint8_t> labels_to_segments(const LabelVector& labels, const ZoneMap& zones) {
  if (static_cast<int>(labels.size()) != zones.m) {
    throw ShapeError("label vector has " + std::to_string(labels.size()) + " zones, expected " +
                     std::to_string(zones.m));
  }
  std::vector<std::uint8_t> out(zones.n, 0);
  for (int z = 1; z <= zones.m; ++z) {
    if (labels[z - 1]) out[zones.segment_of(z).index() - 1] = 1;
  }
  return out;
}

EffectiveLabels effective_labels(const std::vector<std::uint8_t>& segment_labels,
                                 const std::vector<bool>& intruder_present, double alpha) {
  const int n = static_cast<int>(segment_labels.size());
  if (static_cast<int>(intruder_present.size()) != n) {
    throw ShapeError("labels and intruder presence cover different perimeters");
  }
  EffectiveLabels eff;
  eff.alpha = alpha;
  eff.value.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (!intruder_present[j]) continue;
    const double next = segment_labels[(j + 1) % n];
    const double prev = segment_labels[(j + n - 1) % n];
    eff.value[j] = segment_labels[j] + alpha * next + alpha * prev;
  }
  return eff;
}

std::vector<Bid> make_bids(const Scenario& s, const Defender& d, const EffectiveLabels& eff) {
  struct Target {
    SegmentId segment;
    double arrival;
    double weight;
  };
  std::vector<Target> plan;
  for (const Intruder& i : s.intruders) {
    const double w = eff.at(i.segment);
    if (w > 0.0) plan.push_back({i.segment, i.arrival_time(), w});
  }
  std::sort(plan.begin(), plan.end(), [](const Target& a, const Target& b) {
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.segment < b.segment;
  });
  std::vector<Bid> bids;
  SegmentId start = d.segment;
  for (const Target& t : plan) {
    bids.push_back({d.id, t.segment, t.weight * arc_distance(start, t.segment, s.num_segments),
                    start});
    start = t.segment;
  }
  return bids;
}

std::vector<Bid> auction(const std::vector<Bid>& bids) {
  std::map<SegmentId, Bid> best;
  for (const Bid& b : bids) {
    auto [it, fresh] = best.try_emplace(b.segment, b);
    if (fresh) continue;
    const Bid& cur = it->second;
    if (b.cost < cur.cost || (b.cost == cur.cost && b.defender_id < cur.defender_id)) {
      it->second = b;
    }
  }
  std::vector<Bid> winners;
  winners.reserve(best.size());
  for (const auto& [seg, b] : best) winners.push_back(b);
  return winners;
}

PlannedTrajectory build_trajectory(const Defender& d, std::vector<Visit> won, int n) {
  std::sort(won.begin(), won.end(), [](const Visit& a, const Visit& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.segment < b.segment;
  });
  PlannedTrajectory out;
  SegmentId at = d.segment;
  double now = 0.0;
  for (const Visit& v : won) {
    if (v.time >= now - kTimeTolerance &&
        reachable(arc_distance(at, v.segment, n), n, d.max_angular_speed, v.time - now)) {
      out.visits.push_back(v);
      at = v.segment;
      now = v.time;
    } else {
      out.dropped.push_back(v);
    }
  }
  return out;
}

ConsensusPlan plan_from_labels(const Scenario& s,
                               const std::vector<std::vector<std::uint8_t>>& segment_labels,
                               double alpha) {
  if (segment_labels.size() != s.defenders.size()) {
    throw ShapeError("need one label set per defender");
  }
  std::vector<bool> present(s.num_segments, false);
  for (const Intruder& i : s.intruders) present[i.segment.index() - 1] = true;

  std::vector<Bid> bids;
  for (std::size_t k = 0; k < s.defenders.size(); ++k) {
    const auto eff = effective_labels(segment_labels[k], present, alpha);
    const auto mine = make_bids(s, s.defenders[k], eff);
    bids.insert(bids.end(), mine.begin(), mine.end());
  }
  ConsensusPlan plan;
  plan.winners = auction(bids);
  std::vector<std::vector<Visit>> won(s.defenders.size());
  for (const Bid& b : plan.winners) {
    const auto k = s.defender_index(b.defender_id);
    won[*k].push_back({b.segment, s.intruder_at(b.segment)->arrival_time()});
  }
  for (std::size_t k = 0; k < s.defenders.size(); ++k) {
    auto t = build_trajectory(s.defenders[k], std::move(won[k]), s.num_segments);
    plan.trajectories.push_back(std::move(t.visits));
    plan.dropped.insert(plan.dropped.end(), t.dropped.begin(), t.dropped.end());
  }
  std::sort(plan.dropped.begin(), plan.dropped.end(), [](const Visit& a, const Visit& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.segment < b.segment;
  });
  return plan;
}

}  // namespace pdp
