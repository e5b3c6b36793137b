#include "pdp/lsap.hpp"

#include <limits>
#include <string>

#include "pdp/errors.hpp"

namespace pdp {

namespace {
// Stand-in cost for forbidden cells: larger than any sum of permitted costs
// the callers produce, small enough that potentials never overflow.
constexpr std::int64_t kForbidden = std::int64_t{1} << 50;
}  // namespace

LsapResult solve_lsap(const AssignmentCosts& costs) {
  const int n = costs.cols();  // assigned side
  const int m = costs.rows();  // candidate side
  LsapResult result;
  if (n == 0) return result;
  if (m < n) throw DomainError("assignment needs at least as many rows as columns");

  auto cost = [&](int col, int row) {
    const auto& c = costs.at(row, col);
    return c ? *c : kForbidden;
  };

  // 1-based potentials; slot 0 is the virtual root of each augmenting tree.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> owner(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.row_of_col.assign(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (owner[j] != 0) result.row_of_col[owner[j] - 1] = j - 1;
  }
  std::vector<int> bad;
  for (int c = 0; c < n; ++c) {
    const auto& entry = costs.at(result.row_of_col[c], c);
    if (!entry) {
      bad.push_back(c);
    } else {
      result.total += *entry;
    }
  }
  if (!bad.empty()) {
    std::string cols;
    for (int c : bad) cols += (cols.empty() ? "" : ", ") + std::to_string(c);
    throw InfeasibleAssignmentError(bad, "no feasible matching for columns {" + cols + "}");
  }
  return result;
}

}  // namespace pdp
