#include "pdp/expert.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "pdp/errors.hpp"

namespace pdp {

std::vector<Task> sorted_tasks(const Scenario& s) {
  std::vector<Task> tasks;
  tasks.reserve(s.intruders.size());
  for (const auto& i : s.intruders) tasks.push_back({i.id, i.segment, i.arrival_time()});
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
    return a.segment < b.segment;
  });
  return tasks;
}

TaskCostMatrix::TaskCostMatrix(std::vector<Task> tasks, std::vector<Defender> defenders,
                               std::int64_t kappa)
    : tasks_(std::move(tasks)),
      defenders_(std::move(defenders)),
      kappa_(kappa),
      costs_(static_cast<int>(defenders_.size() + tasks_.size()) - (tasks_.empty() ? 0 : 1),
             static_cast<int>(tasks_.size())) {}

TaskCostMatrix build_cost_matrix(const Scenario& s, std::int64_t kappa) {
  const int n = s.num_segments;
  TaskCostMatrix m(sorted_tasks(s), s.defenders, kappa);
  const int N = m.num_defenders();
  const int M = m.num_tasks();
  for (int i = 0; i < N; ++i) {
    const Defender& d = m.defenders_[i];
    for (int j = 0; j < M; ++j) {
      const Task& t = m.tasks_[j];
      const int hops = arc_distance(d.segment, t.segment, n);
      m.costs_.at(i, j) = reachable(hops, n, d.max_angular_speed, t.arrival_time) ? hops : kappa;
    }
  }
  // Successor rows exist for every task but the last. Linking only forward
  // in task order keeps every chain acyclic; ties in arrival time fall back
  // on the segment order of the sort.
  for (int k = 0; k + 1 < M; ++k) {
    const Task& from = m.tasks_[k];
    for (int j = 0; j < M; ++j) {
      if (j <= k) continue;  // left empty: INFEASIBLE
      const Task& to = m.tasks_[j];
      const int hops = arc_distance(from.segment, to.segment, n);
      // Homogeneous team speed; successor legs use the first defender's.
      const double speed = N > 0 ? m.defenders_.front().max_angular_speed : 0.0;
      m.costs_.at(N + k, j) =
          reachable(hops, n, speed, to.arrival_time - from.arrival_time) ? hops : kappa;
    }
  }
  return m;
}

AssignmentSolution solve_assignment(const TaskCostMatrix& m) {
  AssignmentSolution sol;
  const int N = m.num_defenders();
  const int M = m.num_tasks();
  sol.tasks = m.tasks();
  sol.first_assignment.assign(N, std::nullopt);
  sol.successor.assign(M, std::nullopt);
  sol.chains.assign(N, {});
  if (M == 0) return sol;

  const LsapResult r = solve_lsap(m.costs());
  sol.total_cost = r.total;
  for (int j = 0; j < M; ++j) {
    const int row = r.row_of_col[j];
    sol.worst_entry = std::max(sol.worst_entry, *m.at(row, j));
    if (m.is_first_task_row(row)) {
      sol.first_assignment[row] = j;
    } else {
      sol.successor[row - N] = j;
    }
  }
  for (int i = 0; i < N; ++i) {
    for (auto j = sol.first_assignment[i]; j; j = sol.successor[*j]) {
      sol.chains[i].push_back(sol.tasks[*j]);
    }
  }
  return sol;
}

namespace {

Scenario without(const Scenario& s, const std::set<int>& removed) {
  Scenario out = s;
  std::erase_if(out.intruders, [&](const Intruder& i) { return removed.contains(i.id); });
  return out;
}

}  // namespace

AssignmentSolution prune_infeasible(const Scenario& s, std::int64_t kappa) {
  AssignmentSolution sol;
  if (s.defenders.empty()) {
    sol.tasks = {};
    sol.pruned = sorted_tasks(s);
    return sol;
  }
  std::set<int> removed;
  std::vector<Task> removal_order;
  for (;;) {
    const TaskCostMatrix m = build_cost_matrix(without(s, removed), kappa);
    sol = solve_assignment(m);
    if (sol.tasks.empty() || sol.worst_entry < kappa) break;
    // Earliest-arriving task reached through a kappa entry.
    std::optional<int> victim;
    for (int i = 0; i < m.num_defenders(); ++i) {
      if (auto j = sol.first_assignment[i]; j && *m.at(i, *j) >= kappa) {
        victim = victim ? std::min(*victim, *j) : *j;
      }
    }
    for (int k = 0; k < m.num_tasks(); ++k) {
      if (auto j = sol.successor[k]; j && *m.at(m.num_defenders() + k, *j) >= kappa) {
        victim = victim ? std::min(*victim, *j) : *j;
      }
    }
    removed.insert(sol.tasks[*victim].intruder_id);
    removal_order.push_back(sol.tasks[*victim]);
  }

  std::sort(removal_order.begin(), removal_order.end(), [](const Task& a, const Task& b) {
    if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
    return a.segment < b.segment;
  });
  // Sequential removal can drop a task that later removals made reachable.
  bool changed = !removed.empty();
  while (changed) {
    changed = false;
    for (auto it = removal_order.begin(); it != removal_order.end(); ++it) {
      std::set<int> trial = removed;
      trial.erase(it->intruder_id);
      AssignmentSolution candidate = solve_assignment(build_cost_matrix(without(s, trial), kappa));
      if (candidate.worst_entry < kappa) {
        removed = std::move(trial);
        sol = std::move(candidate);
        removal_order.erase(it);
        changed = true;
        break;
      }
    }
  }
  sol.pruned = removal_order;
  return sol;
}

LabelVector labels_from_assignment(const AssignmentSolution& sol, const Scenario& s,
                                   const Defender& d, const ZoneMap& zones) {
  LabelVector labels(zones.m, 0);
  const auto idx = s.defender_index(d.id);
  if (!idx || *idx >= sol.chains.size()) return labels;
  for (const Task& t : sol.chains[*idx]) {
    if (auto z = zones.zone_of(t.segment)) labels[*z - 1] = 1;
  }
  return labels;
}

std::vector<Trajectory> chains_to_trajectories(const AssignmentSolution& sol) {
  std::vector<Trajectory> out(sol.chains.size());
  for (std::size_t i = 0; i < sol.chains.size(); ++i) {
    for (const Task& t : sol.chains[i]) out[i].push_back({t.segment, t.arrival_time});
  }
  return out;
}

namespace {

std::string format_visit(const Visit& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%d, %.6f)", v.segment.index(), v.time);
  return buf;
}

}  // namespace

std::string format_plan(const Scenario& s, const std::vector<Trajectory>& trajectories,
                        const std::vector<Visit>& dropped) {
  std::string out;
  for (std::size_t i = 0; i < s.defenders.size(); ++i) {
    out += "defender " + std::to_string(s.defenders[i].id) + ":";
    if (i < trajectories.size()) {
      for (const Visit& v : trajectories[i]) out += " " + format_visit(v);
    }
    out += "\n";
  }
  out += "pruned:";
  for (const Visit& v : dropped) out += " " + format_visit(v);
  out += "\n";
  return out;
}

std::string format_solution(const Scenario& s, const AssignmentSolution& sol) {
  std::vector<Visit> dropped;
  for (const Task& t : sol.pruned) dropped.push_back({t.segment, t.arrival_time});
  return format_plan(s, chains_to_trajectories(sol), dropped);
}

}  // namespace pdp
