#pragma once

// Exact feasibility of {A v >= 1, v free} for an integer matrix A, decided in
// rational arithmetic. Works on the Farkas alternative
//     exists y >= 0 with A^T y = 0 and sum(y) = 1
// via a phase-1 revised simplex (Bland's rule, mpq throughout): phase-1
// optimum zero yields the y-ray (the system is infeasible), positive optimum
// yields a strictly separating witness v from the simplex multipliers.
// Both outcomes are re-verified exactly before returning.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace relht {

struct FeasibilityResult {
  bool feasible = false;
  // feasible: v with A v >= 1 (size = #columns of A).
  std::vector<mpq_class> witness;
  // infeasible: y >= 0, A^T y = 0, sum(y) = 1 (size = #rows of A).
  std::vector<mpq_class> ray;
};

// rows[i] is one constraint row a_i with a_i . v >= 1. Entries are small
// integers (hypercube coordinates and +-1 threshold coefficients).
FeasibilityResult solve_margin_feasibility(
    const std::vector<std::vector<int>>& rows);

}  // namespace relht
