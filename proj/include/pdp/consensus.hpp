#pragma once

// Turns every defender's predicted labels into conflict-free, feasible
// trajectories: neighbor smoothing of the labels, one synchronous min-cost
// auction per segment, then an arrival-ordered visit plan per defender.

#include <optional>
#include <vector>

#include "pdp/spike_encoding.hpp"
#include "pdp/world.hpp"

namespace pdp {

// Zone labels moved to the global frame: entry s-1 is segment s, unobserved
// segments read 0.
std::vector<std::uint8_t> labels_to_segments(const LabelVector& labels, const ZoneMap& zones);

struct EffectiveLabels {
  std::vector<double> value;  // entry s-1 is segment s
  double alpha = 0.0;

  double at(SegmentId s) const { return value.at(s.index() - 1); }
};

// l_eff(s) = l(s) + alpha * (l(s+1) + l(s-1)) where an intruder sits on s,
// 0 elsewhere. Neighbors wrap around the perimeter.
EffectiveLabels effective_labels(const std::vector<std::uint8_t>& segment_labels,
                                 const std::vector<bool>& intruder_present, double alpha);

struct Bid {
  int defender_id = 0;
  SegmentId segment;
  double cost = 0.0;
  SegmentId start;  // where the defender would set off for this segment
};

// One bid per segment with positive effective label. The defender's plan
// visits those segments in arrival order; each bid starts from the plan's
// previous segment (the defender's own segment for the first).
std::vector<Bid> make_bids(const Scenario& s, const Defender& d, const EffectiveLabels& eff);

// Lowest cost wins each segment, lower defender id on equal cost. Winners
// come back ordered by segment.
std::vector<Bid> auction(const std::vector<Bid>& bids);

struct PlannedTrajectory {
  Trajectory visits;
  std::vector<Visit> dropped;  // legs the speed limit ruled out
};

// Sorts the won visits by time and keeps each one reachable from the last
// kept stop (the defender's segment at first).
PlannedTrajectory build_trajectory(const Defender& d, std::vector<Visit> won, int n);

struct ConsensusPlan {
  std::vector<Trajectory> trajectories;  // per s.defenders entry
  std::vector<Visit> dropped;
  std::vector<Bid> winners;
};

// Full pipeline from per-defender global-frame labels (segment_labels[k]
// belongs to s.defenders[k]).
ConsensusPlan plan_from_labels(const Scenario& s,
                               const std::vector<std::vector<std::uint8_t>>& segment_labels,
                               double alpha);

}  // namespace pdp
