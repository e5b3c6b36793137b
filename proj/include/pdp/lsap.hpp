#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pdp {

// Dense rectangular cost matrix for the linear sum assignment solver.
// Entries left empty are forbidden and never matched.
class AssignmentCosts {
 public:
  AssignmentCosts(int rows, int cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::optional<std::int64_t>& at(int r, int c) { return cells_[r * cols_ + c]; }
  const std::optional<std::int64_t>& at(int r, int c) const { return cells_[r * cols_ + c]; }

 private:
  int rows_;
  int cols_;
  std::vector<std::optional<std::int64_t>> cells_;
};

struct LsapResult {
  std::vector<int> row_of_col;  // matched row for every column
  std::int64_t total = 0;
};

// Matches every column to a distinct row at minimum total cost (rows >= cols).
// Shortest augmenting path Hungarian method, O(cols^2 * rows).
// Throws InfeasibleAssignmentError listing the columns that could only be
// matched through forbidden entries.
LsapResult solve_lsap(const AssignmentCosts& costs);

}  // namespace pdp
