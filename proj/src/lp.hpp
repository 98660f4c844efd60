#pragma once

#include <vector>

namespace anglelab::detail {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

// maximize c.x subject to A x <= b and x >= 0 (dense two-phase simplex with
// Bland-style tie breaking). Intended for the small systems that describe
// user-supplied polytopes.
LpResult solve_lp(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<double>& c);

}  // namespace anglelab::detail
