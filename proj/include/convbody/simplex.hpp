#pragma once

#include <cstddef>
#include <vector>

#include "convbody/vec.hpp"

namespace convbody {

// Dense LP in the form
//   maximize c.z  subject to  A_ub z <= b_ub,  A_eq z = b_eq,  z >= 0.
// Sizes here are tiny (tens of rows), so a plain tableau is enough.
struct LpProblem {
  std::size_t nvars = 0;
  std::vector<Vec> a_ub;
  Vec b_ub;
  std::vector<Vec> a_eq;
  Vec b_eq;
  Vec objective;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vec z;
  double objective = 0.0;
  int iterations = 0;
  // Largest positive reduced cost left at termination; at a clean optimum
  // this is the optimality certificate (<= 1e-10).
  double reduced_cost_violation = 0.0;
};

// Two-phase tableau simplex with Bland's rule (guaranteed termination).
LpSolution simplex_solve(const LpProblem& lp);

}  // namespace convbody
