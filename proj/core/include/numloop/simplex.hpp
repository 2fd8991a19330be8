// Exact two-phase simplex over the rationals for systems Ax = b, x >= 0,
// minimizing a linear objective. Bland's rule, so no cycling.
#pragma once

#include <optional>
#include <vector>

#include "numloop/ast.hpp"

namespace numloop {

struct LinearProgram {
  size_t nvars = 0;
  // Each row: coefficients (size nvars) and right-hand side; meaning
  // sum(coeff * x) = rhs with every x >= 0.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  // Minimized; empty means pure feasibility.
  std::vector<Rat> objective;
};

// A feasible (and objective-minimal) assignment, or nullopt if infeasible.
std::optional<std::vector<Rat>> solve_lp(const LinearProgram& lp);

}  // namespace numloop
