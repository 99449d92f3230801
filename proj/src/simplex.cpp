#include "funnelkit/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace funnelkit::lp {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  std::size_t n_struct = 0;   // structural variables
  std::size_t n_total = 0;    // structural + slack + artificial
  std::size_t first_art = 0;  // first artificial column
  std::vector<std::vector<double>> rows;  // each n_total + 1 (rhs last)
  std::vector<std::size_t> basis;         // basic variable per row

  double rhs(std::size_t r) const { return rows[r][n_total]; }
};

void pivot(Tableau& t, std::size_t pr, std::size_t pc) {
  std::vector<double>& prow = t.rows[pr];
  const double inv = 1.0 / prow[pc];
  for (double& v : prow) v *= inv;
  prow[pc] = 1.0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r == pr) continue;
    const double factor = t.rows[r][pc];
    if (std::abs(factor) < kPivotTol) {
      t.rows[r][pc] = 0.0;
      continue;
    }
    for (std::size_t c = 0; c <= t.n_total; ++c) t.rows[r][c] -= factor * prow[c];
    t.rows[r][pc] = 0.0;
  }
  t.basis[pr] = pc;
}

// Reduced costs z_j = c_j - c_B B^{-1} A_j for a canonical tableau.
std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& cost) {
  std::vector<double> z(cost.begin(), cost.end());
  z.push_back(0.0);  // objective value (negated) accumulates in the rhs slot
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double cb = cost[t.basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= t.n_total; ++c) z[c] -= cb * t.rows[r][c];
  }
  return z;
}

// Bland's rule: smallest eligible entering column, smallest basic-variable
// index among the ratio-test ties. `allow` masks columns out (artificials in
// phase 2). Returns false once optimal, throws Status via out param on
// unbounded.
bool iterate(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allow,
             double tol, bool& unbounded) {
  const std::vector<double> z = reduced_costs(t, cost);
  std::size_t enter = t.n_total;
  for (std::size_t c = 0; c < t.n_total; ++c) {
    if (allow[c] && z[c] < -tol) {
      enter = c;
      break;
    }
  }
  if (enter == t.n_total) return false;  // optimal

  std::size_t leave = t.rows.size();
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double a = t.rows[r][enter];
    if (a <= kPivotTol) continue;
    const double ratio = t.rhs(r) / a;
    if (ratio < best_ratio - 1e-12 ||
        (ratio < best_ratio + 1e-12 && (leave == t.rows.size() || t.basis[r] < t.basis[leave]))) {
      best_ratio = ratio;
      leave = r;
    }
  }
  if (leave == t.rows.size()) {
    unbounded = true;
    return false;
  }
  pivot(t, leave, enter);
  return true;
}

double objective_value(const Tableau& t, const std::vector<double>& cost) {
  double v = 0.0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) v += cost[t.basis[r]] * t.rhs(r);
  return v;
}

}  // namespace

Result solve(const Problem& problem, double tol) {
  const std::size_t n = problem.objective.size();
  for (const auto& row : problem.ub_rows)
    if (row.size() != n) throw std::invalid_argument("lp: ub row width mismatch");
  for (const auto& row : problem.eq_rows)
    if (row.size() != n) throw std::invalid_argument("lp: eq row width mismatch");

  const std::size_t m = problem.ub_rows.size() + problem.eq_rows.size();
  const std::size_t n_slack = problem.ub_rows.size();

  // Artificials: one per negated ub row (>= after sign flip) and per eq row.
  std::size_t n_art = problem.eq_rows.size();
  for (double b : problem.ub_rhs)
    if (b < 0.0) ++n_art;

  Tableau t;
  t.n_struct = n;
  t.n_total = n + n_slack + n_art;
  t.first_art = n + n_slack;
  t.rows.assign(m, std::vector<double>(t.n_total + 1, 0.0));
  t.basis.assign(m, 0);

  std::size_t art = t.first_art;
  for (std::size_t i = 0; i < problem.ub_rows.size(); ++i) {
    auto& row = t.rows[i];
    const double sign = problem.ub_rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) row[c] = sign * problem.ub_rows[i][c];
    row[t.n_total] = sign * problem.ub_rhs[i];
    row[n + i] = sign;  // slack (surplus when the row was negated)
    if (sign < 0.0) {
      row[art] = 1.0;
      t.basis[i] = art++;
    } else {
      t.basis[i] = n + i;
    }
  }
  for (std::size_t i = 0; i < problem.eq_rows.size(); ++i) {
    auto& row = t.rows[problem.ub_rows.size() + i];
    const double sign = problem.eq_rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) row[c] = sign * problem.eq_rows[i][c];
    row[t.n_total] = sign * problem.eq_rhs[i];
    row[art] = 1.0;
    t.basis[problem.ub_rows.size() + i] = art++;
  }

  std::vector<bool> allow_all(t.n_total, true);
  bool unbounded = false;

  if (n_art > 0) {
    std::vector<double> phase1(t.n_total, 0.0);
    for (std::size_t c = t.first_art; c < t.n_total; ++c) phase1[c] = 1.0;
    while (iterate(t, phase1, allow_all, tol, unbounded)) {
    }
    if (unbounded) throw std::logic_error("lp: phase 1 unbounded");
    if (objective_value(t, phase1) > tol) return {Status::infeasible, {}, 0.0};
    // Drive leftover artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < t.rows.size();) {
      if (t.basis[r] < t.first_art) {
        ++r;
        continue;
      }
      std::size_t col = t.first_art;
      for (std::size_t c = 0; c < t.first_art; ++c) {
        if (std::abs(t.rows[r][c]) > kPivotTol) {
          col = c;
          break;
        }
      }
      if (col < t.first_art) {
        pivot(t, r, col);
        ++r;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(r));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  std::vector<double> cost(t.n_total, 0.0);
  for (std::size_t c = 0; c < n; ++c) cost[c] = problem.objective[c];
  std::vector<bool> allow(t.n_total, true);
  for (std::size_t c = t.first_art; c < t.n_total; ++c) allow[c] = false;
  while (iterate(t, cost, allow, tol, unbounded)) {
  }
  if (unbounded) return {Status::unbounded, {}, 0.0};

  Result result;
  result.status = Status::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.basis[r] < n) result.x[t.basis[r]] = t.rhs(r);
  }
  result.objective = objective_value(t, cost);
  return result;
}

}  // namespace funnelkit::lp
