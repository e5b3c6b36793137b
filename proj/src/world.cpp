#include "pdp/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"
#include "pdp/errors.hpp"

namespace pdp {

namespace {

void require_segment(SegmentId s, int n, const char* what) {
  if (n < 1) throw DomainError("segment count must be positive");
  if (s.index() < 1 || s.index() > n) {
    throw DomainError(std::string(what) + ": segment " + std::to_string(s.index()) +
                      " outside [1, " + std::to_string(n) + "]");
  }
}

// +1 when the shorter way from a to b is anticlockwise (ties go anticlockwise).
int travel_direction(SegmentId a, SegmentId b, int n) {
  const int forward = ((b.index() - a.index()) % n + n) % n;
  return 2 * forward <= n ? 1 : -1;
}

}  // namespace

SegmentId wrap_segment(long long raw, int n) {
  if (n < 1) throw DomainError("segment count must be positive");
  const long long r = ((raw - 1) % n + n) % n;
  return SegmentId(static_cast<int>(r) + 1);
}

SegmentId shift(SegmentId s, long long k, int n) { return wrap_segment(s.index() + k, n); }

int arc_distance(SegmentId a, SegmentId b, int n) {
  require_segment(a, n, "arc_distance");
  require_segment(b, n, "arc_distance");
  const int d = std::abs(a.index() - b.index());
  return std::min(d, n - d);
}

double hop_angle(int n) { return 2.0 * std::numbers::pi / n; }

double segment_center_angle(SegmentId s, int n) { return (s.index() - 0.5) * hop_angle(n); }

double travel_time(int hops, int n, double angular_speed) {
  if (hops == 0) return 0.0;
  return hops * hop_angle(n) / angular_speed;
}

bool reachable(int hops, int n, double angular_speed, double available) {
  if (hops == 0) return available >= -kTimeTolerance;
  if (!(angular_speed > 0.0)) return false;
  return travel_time(hops, n, angular_speed) <= available + kTimeTolerance;
}

double arrival_time(const Intruder& intruder) {
  if (!(intruder.radial_speed > 0.0)) {
    throw DomainError("intruder " + std::to_string(intruder.id) + " has non-positive radial speed");
  }
  return (intruder.radius - 1.0) / intruder.radial_speed;
}

double Intruder::arrival_time() const { return pdp::arrival_time(*this); }

void Scenario::validate() const {
  if (num_segments < 1) throw DomainError("scenario needs at least one segment");
  if (!(horizon > 0.0)) throw DomainError("scenario horizon must be positive");
  for (const auto& d : defenders) require_segment(d.segment, num_segments, "defender");
  std::set<int> used;
  for (const auto& i : intruders) {
    require_segment(i.segment, num_segments, "intruder");
    if (!used.insert(i.segment.index()).second) {
      throw DomainError("two intruders share segment " + std::to_string(i.segment.index()));
    }
    if (!(i.radius > 1.0)) {
      throw DomainError("intruder " + std::to_string(i.id) + " starts on or inside the perimeter");
    }
    if (!(i.radial_speed > 0.0)) {
      throw DomainError("intruder " + std::to_string(i.id) + " has non-positive radial speed");
    }
  }
}

const Intruder* Scenario::intruder_at(SegmentId s) const {
  for (const auto& i : intruders) {
    if (i.segment == s) return &i;
  }
  return nullptr;
}

const Defender* Scenario::defender_by_id(int id) const {
  for (const auto& d : defenders) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

std::optional<std::size_t> Scenario::defender_index(int id) const {
  for (std::size_t k = 0; k < defenders.size(); ++k) {
    if (defenders[k].id == id) return k;
  }
  return std::nullopt;
}

Scenario rotate(const Scenario& s, int k) {
  Scenario out = s;
  for (auto& d : out.defenders) d.segment = shift(d.segment, k, s.num_segments);
  for (auto& i : out.intruders) i.segment = shift(i.segment, k, s.num_segments);
  return out;
}

void check_feasible(const Scenario& s, std::span<const Trajectory> trajectories) {
  const int n = s.num_segments;
  for (std::size_t k = 0; k < trajectories.size() && k < s.defenders.size(); ++k) {
    const Defender& d = s.defenders[k];
    SegmentId at = d.segment;
    double now = 0.0;
    for (std::size_t leg = 0; leg < trajectories[k].size(); ++leg) {
      const Visit& v = trajectories[k][leg];
      require_segment(v.segment, n, "visit");
      const int hops = arc_distance(at, v.segment, n);
      if (v.time < now - kTimeTolerance || !reachable(hops, n, d.max_angular_speed, v.time - now)) {
        throw FeasibilityError(
            d.id, leg,
            "defender " + std::to_string(d.id) + " leg " + std::to_string(leg) + ": " +
                std::to_string(hops) + " hops from segment " + std::to_string(at.index()) +
                " to " + std::to_string(v.segment.index()) + " in " +
                std::to_string(v.time - now) + " s exceeds the angular speed limit");
      }
      at = v.segment;
      now = v.time;
    }
  }
}

std::optional<SegmentId> occupied_segment(const Defender& d, const Trajectory& trajectory,
                                          int n, double t) {
  SegmentId from = d.segment;
  double depart = 0.0;
  for (const Visit& v : trajectory) {
    if (t <= v.time + kTimeTolerance) {
      const int hops = arc_distance(from, v.segment, n);
      if (hops == 0) return from;
      const double hop_time = travel_time(1, n, d.max_angular_speed);
      const double elapsed = t - depart;
      if (elapsed >= hops * hop_time - kTimeTolerance) return v.segment;
      if (elapsed <= kTimeTolerance) return from;
      const double q = std::round(elapsed / hop_time);
      if (std::abs(elapsed - q * hop_time) <= kTimeTolerance) {
        return shift(from, travel_direction(from, v.segment, n) * static_cast<long long>(q), n);
      }
      return std::nullopt;
    }
    from = v.segment;
    depart = v.time;
  }
  return from;
}

CaptureReport simulate_episode(const Scenario& s, std::span<const Trajectory> trajectories) {
  check_feasible(s, trajectories);
  static const Trajectory kStay;
  CaptureReport report;
  for (const Intruder& intruder : s.intruders) {
    const double t = intruder.arrival_time();
    std::optional<int> capturer;
    for (std::size_t k = 0; k < s.defenders.size(); ++k) {
      const Trajectory& traj = k < trajectories.size() ? trajectories[k] : kStay;
      const auto at = occupied_segment(s.defenders[k], traj, s.num_segments, t);
      if (at && *at == intruder.segment && (!capturer || s.defenders[k].id < *capturer)) {
        capturer = s.defenders[k].id;
      }
    }
    if (capturer) {
      report.captured.push_back({intruder.id, *capturer, t, intruder.segment});
    } else {
      report.escaped.push_back({intruder.id, t, intruder.segment});
    }
  }
  report.success_percentage =
      report.total() == 0 ? 100.0 : 100.0 * static_cast<double>(report.captured.size()) /
                                        static_cast<double>(report.total());
  return report;
}

std::string to_record(const Scenario& s) {
  nlohmann::ordered_json j;
  j["n"] = s.num_segments;
  j["horizon"] = s.horizon;
  auto defenders = nlohmann::ordered_json::array();
  for (const auto& d : s.defenders) {
    nlohmann::ordered_json e;
    e["id"] = d.id;
    e["segment"] = d.segment.index();
    defenders.push_back(std::move(e));
  }
  j["defenders"] = std::move(defenders);
  auto intruders = nlohmann::ordered_json::array();
  for (const auto& i : s.intruders) {
    nlohmann::ordered_json e;
    e["id"] = i.id;
    e["segment"] = i.segment.index();
    e["radius"] = i.radius;
    intruders.push_back(std::move(e));
  }
  j["intruders"] = std::move(intruders);
  // Speeds are homogeneous across each team.
  nlohmann::ordered_json speeds;
  speeds["defender"] = s.defenders.empty() ? 0.0 : s.defenders.front().max_angular_speed;
  speeds["intruder"] = s.intruders.empty() ? 0.5 : s.intruders.front().radial_speed;
  j["speeds"] = std::move(speeds);
  return j.dump();
}

Scenario scenario_from_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    Scenario s;
    s.num_segments = j.at("n").get<int>();
    s.horizon = j.at("horizon").get<double>();
    const double vd = j.at("speeds").at("defender").get<double>();
    const double vi = j.at("speeds").at("intruder").get<double>();
    for (const auto& e : j.at("defenders")) {
      s.defenders.push_back({e.at("id").get<int>(), SegmentId(e.at("segment").get<int>()), vd});
    }
    for (const auto& e : j.at("intruders")) {
      s.intruders.push_back({e.at("id").get<int>(), SegmentId(e.at("segment").get<int>()),
                             e.at("radius").get<double>(), vi});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad scenario record: ") + e.what());
  }
}

}  // namespace pdp
