#include "convbody/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace convbody {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr double kFeasEps = 1e-9;

// Tableau layout: rows 0..m-1 are constraints with the rhs in the last
// column; row m is the (minimization) objective. basis[i] is the variable
// basic in row i.
struct Tableau {
  std::size_t m = 0, ncols = 0;  // ncols excludes the rhs column
  std::vector<Vec> t;
  std::vector<std::size_t> basis;
  int iterations = 0;

  double& at(std::size_t i, std::size_t j) { return t[i][j]; }
  double rhs(std::size_t i) const { return t[i][ncols]; }

  void pivot(std::size_t row, std::size_t col) {
    double inv = 1.0 / t[row][col];
    for (std::size_t j = 0; j <= ncols; ++j) t[row][j] *= inv;
    t[row][col] = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == row) continue;
      double f = t[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
    }
    basis[row] = col;
    ++iterations;
  }

  // Bland's rule on the current objective row; `allowed(j)` masks columns.
  // Returns false on optimality, throws NumericalFailure-free: unbounded is
  // signalled by setting *unbounded.
  bool step(const std::vector<bool>& allowed, bool* unbounded) {
    *unbounded = false;
    std::size_t enter = ncols;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!allowed[j]) continue;
      if (t[m][j] < -kCostEps) {
        enter = j;
        break;  // lowest index: Bland
      }
    }
    if (enter == ncols) return false;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double a = t[i][enter];
      if (a <= kPivotEps) continue;
      double ratio = rhs(i) / a;
      if (ratio < best_ratio - 1e-15 ||
          (std::fabs(ratio - best_ratio) <= 1e-15 && (leave == m || basis[i] < basis[leave]))) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == m) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

LpSolution simplex_solve(const LpProblem& lp) {
  const std::size_t n = lp.nvars;
  const std::size_t m_ub = lp.a_ub.size();
  const std::size_t m_eq = lp.a_eq.size();
  const std::size_t m = m_ub + m_eq;
  if (lp.objective.size() != n) throw std::invalid_argument("simplex_solve: objective size");

  // Columns: n structural, m_ub slacks, then one artificial per row that
  // needs it. Rows are normalized to rhs >= 0 first.
  Tableau tb;
  tb.m = m;
  std::vector<Vec> rows(m, Vec(n, 0.0));
  Vec rhs(m, 0.0);
  Vec slack_sign(m_ub, 1.0);
  for (std::size_t i = 0; i < m_ub; ++i) {
    if (lp.a_ub[i].size() != n) throw std::invalid_argument("simplex_solve: a_ub row size");
    rows[i] = lp.a_ub[i];
    rhs[i] = lp.b_ub[i];
  }
  for (std::size_t i = 0; i < m_eq; ++i) {
    if (lp.a_eq[i].size() != n) throw std::invalid_argument("simplex_solve: a_eq row size");
    rows[m_ub + i] = lp.a_eq[i];
    rhs[m_ub + i] = lp.b_eq[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      for (double& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (i < m_ub) slack_sign[i] = -1.0;
    }
  }

  // Rows whose slack entered with +1 give a ready-made basic column;
  // everything else gets an artificial.
  std::vector<std::size_t> artificial_col(m, 0);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    bool needs_art = (i >= m_ub) || slack_sign[i] < 0.0;
    if (needs_art) ++n_art;
  }
  tb.ncols = n + m_ub + n_art;
  tb.t.assign(m + 1, Vec(tb.ncols + 1, 0.0));
  tb.basis.assign(m, 0);

  std::size_t art = n + m_ub;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tb.t[i][j] = rows[i][j];
    if (i < m_ub) tb.t[i][n + i] = slack_sign[i];
    tb.t[i][tb.ncols] = rhs[i];
    bool needs_art = (i >= m_ub) || slack_sign[i] < 0.0;
    if (needs_art) {
      tb.t[i][art] = 1.0;
      tb.basis[i] = art;
      artificial_col[i] = art;
      ++art;
    } else {
      tb.basis[i] = n + i;
      artificial_col[i] = tb.ncols;  // none
    }
  }

  LpSolution sol;

  std::vector<bool> allowed(tb.ncols, true);
  auto is_artificial = [&](std::size_t j) { return j >= n + m_ub; };

  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials.
    for (std::size_t i = 0; i < m; ++i) {
      if (artificial_col[i] == tb.ncols) continue;
      for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[m][j] -= tb.t[i][j];
      tb.t[m][artificial_col[i]] = 0.0;
    }
    bool unbounded = false;
    while (tb.step(allowed, &unbounded)) {
    }
    double phase1 = -tb.t[m][tb.ncols];
    if (phase1 > kFeasEps) {
      sol.status = LpStatus::infeasible;
      sol.iterations = tb.iterations;
      return sol;
    }
    // Pivot remaining basic artificials out where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial(tb.basis[i])) continue;
      std::size_t col = tb.ncols;
      for (std::size_t j = 0; j < n + m_ub; ++j) {
        if (std::fabs(tb.t[i][j]) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col != tb.ncols) tb.pivot(i, col);
      // A fully zero row is redundant; its artificial stays basic at 0.
    }
    for (std::size_t j = n + m_ub; j < tb.ncols; ++j) allowed[j] = false;
  }

  // Phase 2 objective: minimize -c.z, expressed through the current basis.
  for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[m][j] = 0.0;
  for (std::size_t j = 0; j < n; ++j) tb.t[m][j] = -lp.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    double coef = tb.t[m][tb.basis[i]];
    if (coef == 0.0) continue;
    for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[m][j] -= coef * tb.t[i][j];
    tb.t[m][tb.basis[i]] = 0.0;
  }

  bool unbounded = false;
  while (tb.step(allowed, &unbounded)) {
  }
  sol.iterations = tb.iterations;
  if (unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.z.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] < n) sol.z[tb.basis[i]] = tb.rhs(i);
  sol.objective = dot(sol.z, lp.objective);
  double worst = 0.0;
  for (std::size_t j = 0; j < tb.ncols; ++j)
    if (allowed[j]) worst = std::max(worst, -tb.t[m][j]);
  sol.reduced_cost_violation = worst;
  return sol;
}

}  // namespace convbody
