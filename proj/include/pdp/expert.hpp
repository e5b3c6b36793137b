#pragma once

// Centralized expert policy. Every intruder becomes a spatio-temporal task
// (its segment at its arrival time). A defender takes a task either first,
// starting from its own segment, or right after another task. The choice is
// a linear sum assignment over N first-task rows and M-1 successor rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdp/lsap.hpp"
#include "pdp/spike_encoding.hpp"
#include "pdp/world.hpp"

namespace pdp {

struct Task {
  int intruder_id = 0;
  SegmentId segment;
  double arrival_time = 0.0;

  friend bool operator==(const Task&, const Task&) = default;
};

// Large finite cost for legs the speed limit forbids: 10 segments per
// segment of perimeter, far above any reachable arc.
inline std::int64_t default_kappa(int n) { return 10 * static_cast<std::int64_t>(n); }

// Tasks in ascending (arrival time, segment) order.
std::vector<Task> sorted_tasks(const Scenario& s);

class TaskCostMatrix {
 public:
  TaskCostMatrix(std::vector<Task> tasks, std::vector<Defender> defenders, std::int64_t kappa);

  int num_defenders() const { return static_cast<int>(defenders_.size()); }
  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  int rows() const { return costs_.rows(); }
  int cols() const { return costs_.cols(); }
  std::int64_t kappa() const { return kappa_; }

  // Rows [0, N) are defenders, rows N + k are "after task k".
  bool is_first_task_row(int row) const { return row < num_defenders(); }

  // nullopt marks INFEASIBLE (the leg would run backwards in time).
  const std::optional<std::int64_t>& at(int row, int col) const { return costs_.at(row, col); }

  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<Defender>& defenders() const { return defenders_; }
  const AssignmentCosts& costs() const { return costs_; }

 private:
  friend TaskCostMatrix build_cost_matrix(const Scenario&, std::int64_t);

  std::vector<Task> tasks_;
  std::vector<Defender> defenders_;
  std::int64_t kappa_;
  AssignmentCosts costs_;
};

// Arc cost in segment hops when the speed limit allows the leg, kappa when it
// does not, INFEASIBLE when the successor would come earlier in task order.
TaskCostMatrix build_cost_matrix(const Scenario& s, std::int64_t kappa);

struct AssignmentSolution {
  std::vector<Task> tasks;  // surviving tasks, sorted
  std::vector<std::optional<int>> first_assignment;  // per defender: task index
  std::vector<std::optional<int>> successor;         // per task: next task index
  std::vector<std::vector<Task>> chains;             // per defender, in visit order
  std::int64_t total_cost = 0;
  std::vector<Task> pruned;
  // Largest matched entry; >= kappa means some leg breaks the speed limit.
  std::int64_t worst_entry = 0;
};

AssignmentSolution solve_assignment(const TaskCostMatrix& m);

// Solves, drops the earliest-arriving task matched at kappa, re-solves until
// every matched entry is below kappa, then re-admits any dropped task that
// now fits without a kappa entry.
AssignmentSolution prune_infeasible(const Scenario& s, std::int64_t kappa);

// Bit k is set when the defender's chain visits the segment of zone k.
LabelVector labels_from_assignment(const AssignmentSolution& sol, const Scenario& s,
                                   const Defender& d, const ZoneMap& zones);

// Visits (task segment, arrival time) per defender, scenario order.
std::vector<Trajectory> chains_to_trajectories(const AssignmentSolution& sol);

// Text dump: one "defender <id>:" line of (segment, time) pairs per defender
// and a final "pruned:" line. Shared with the consensus trajectories.
std::string format_plan(const Scenario& s, const std::vector<Trajectory>& trajectories,
                        const std::vector<Visit>& dropped);
std::string format_solution(const Scenario& s, const AssignmentSolution& sol);

}  // namespace pdp
