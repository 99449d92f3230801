#pragma once

#include <cstddef>
#include <vector>

namespace funnelkit::lp {

// min c·x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
struct Problem {
  std::vector<double> objective;
  std::vector<std::vector<double>> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
};

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Two-phase primal simplex on the dense tableau with Bland's anti-cycling
// rule. Sized for desk-scale problems (tens of variables and rows).
Result solve(const Problem& problem, double tol = 1e-9);

}  // namespace funnelkit::lp
