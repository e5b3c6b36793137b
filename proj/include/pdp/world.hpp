#pragma once

// Discrete circular territory: equal perimeter segments, defenders that move
// along the perimeter, intruders that move radially inward, and an
// event-driven episode simulator.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdp {

// Slack allowed when comparing required travel time against available time.
inline constexpr double kTimeTolerance = 1e-9;

// 1-based index of a perimeter segment. Segment s spans the angles
// [(s-1)h, s*h) with h = 2*pi/n, so its center sits at (s - 1/2)h.
class SegmentId {
 public:
  SegmentId() = default;
  explicit constexpr SegmentId(int index) : index_(index) {}

  constexpr int index() const { return index_; }

  friend constexpr auto operator<=>(SegmentId, SegmentId) = default;

 private:
  int index_ = 1;
};

// Maps any integer onto [1, n] cyclically (0 -> n, -1 -> n-1, n+1 -> 1).
SegmentId wrap_segment(long long raw, int n);

// Cyclic shift by k segments (positive k is anticlockwise).
SegmentId shift(SegmentId s, long long k, int n);

// Number of segment hops along the shorter direction.
int arc_distance(SegmentId a, SegmentId b, int n);

// Angle subtended by one segment.
double hop_angle(int n);

double segment_center_angle(SegmentId s, int n);

double travel_time(int hops, int n, double angular_speed);

// True when `hops` segments can be covered within `available` seconds.
bool reachable(int hops, int n, double angular_speed, double available);

struct Defender {
  static constexpr double kRadius = 1.0;

  int id = 0;
  SegmentId segment;
  double max_angular_speed = 0.0;  // rad/s

  double angular_position(int n) const { return segment_center_angle(segment, n); }
};

struct Intruder {
  int id = 0;
  SegmentId segment;
  double radius = 1.0;        // distance from the territory center
  double radial_speed = 0.5;  // units/s, towards the center

  double arrival_time() const;
};

// (radius - 1) / radial_speed; throws DomainError for non-positive speed.
double arrival_time(const Intruder& intruder);

struct Scenario {
  int num_segments = 36;
  std::vector<Defender> defenders;
  std::vector<Intruder> intruders;
  double horizon = 8.0;

  // Throws DomainError when a segment is out of range, two intruders share
  // a segment, or an intruder starts on or inside the perimeter.
  void validate() const;

  const Intruder* intruder_at(SegmentId s) const;
  const Defender* defender_by_id(int id) const;
  std::optional<std::size_t> defender_index(int id) const;
};

// Rotates every segment reference of a scenario by k.
Scenario rotate(const Scenario& s, int k);

struct Visit {
  SegmentId segment;
  double time = 0.0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

// Ordered visits of one defender. Before each visit the defender leaves its
// previous stop at full speed along the shorter arc and waits at the visit
// segment until the visit time.
using Trajectory = std::vector<Visit>;

struct Capture {
  int intruder_id = 0;
  int defender_id = 0;
  double time = 0.0;
  SegmentId segment;
};

struct Escape {
  int intruder_id = 0;
  double time = 0.0;
  SegmentId segment;
};

struct CaptureReport {
  std::vector<Capture> captured;
  std::vector<Escape> escaped;
  double success_percentage = 100.0;

  std::size_t total() const { return captured.size() + escaped.size(); }
};

// Throws FeasibilityError naming the defender and leg index when a leg
// needs more than the defender's angular speed or runs backwards in time.
void check_feasible(const Scenario& s, std::span<const Trajectory> trajectories);

// Segment whose center the defender is on at time t, or nullopt while it is
// between centers.
std::optional<SegmentId> occupied_segment(const Defender& d, const Trajectory& trajectory,
                                          int n, double t);

// trajectories[k] belongs to s.defenders[k]; missing entries mean "stay put".
CaptureReport simulate_episode(const Scenario& s, std::span<const Trajectory> trajectories);

// One-line text record with a fixed field order; round-trips exactly.
std::string to_record(const Scenario& s);
Scenario scenario_from_record(std::string_view line);

}  // namespace pdp
