#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "pdp/dataset.hpp"
#include "pdp/expert.hpp"
#include "pdp/world.hpp"

namespace pdp::testing {

inline Defender defender(int id, int segment, double speed = 0.47) {
  return {id, SegmentId(segment), speed};
}

// Intruder at `segment` arriving at time t with radial speed 0.5.
inline Intruder intruder(int id, int segment, double t) {
  return {id, SegmentId(segment), 1.0 + 0.5 * t, 0.5};
}

// Exhaustive minimum over every split of the tasks among the defenders.
// Each defender visits its share in arrival order; a leg costs its arc in
// hops when reachable in time and kappa otherwise.
inline std::int64_t brute_force_cost(const Scenario& s, std::int64_t kappa) {
  const auto tasks = sorted_tasks(s);
  const int N = static_cast<int>(s.defenders.size());
  const int M = static_cast<int>(tasks.size());
  const int n = s.num_segments;
  if (M == 0) return 0;
  std::vector<int> owner(M, 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (;;) {
    std::int64_t total = 0;
    for (int d = 0; d < N; ++d) {
      SegmentId at = s.defenders[d].segment;
      double now = 0.0;
      for (int j = 0; j < M; ++j) {
        if (owner[j] != d) continue;
        const int hops = arc_distance(at, tasks[j].segment, n);
        total += reachable(hops, n, s.defenders[d].max_angular_speed,
                           tasks[j].arrival_time - now)
                     ? hops
                     : kappa;
        at = tasks[j].segment;
        now = tasks[j].arrival_time;
      }
    }
    best = std::min(best, total);
    int k = 0;
    while (k < M && ++owner[k] == N) owner[k++] = 0;
    if (k == M) break;
  }
  return best;
}

// Small random instance: N defenders, M intruders on distinct segments.
inline Scenario random_instance(Rng& rng, int N, int M, int n = 36, double speed = 0.47) {
  Scenario s;
  s.num_segments = n;
  for (int d = 0; d < N; ++d) {
    s.defenders.push_back(defender(d + 1, static_cast<int>(rng.below(n)) + 1, speed));
  }
  std::vector<int> segs(n);
  for (int k = 0; k < n; ++k) segs[k] = k + 1;
  for (int j = 0; j < M; ++j) {
    std::swap(segs[j], segs[j + rng.below(n - j)]);
    s.intruders.push_back(intruder(j + 1, segs[j], 8.0 - 8.0 * rng.uniform()));
  }
  return s;
}

}  // namespace pdp::testing
