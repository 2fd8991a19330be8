// Depth-bounded LD-resolution interpreter: textual clause order, leftmost
// selection, occurs check on. Ground truth for semantics preservation and
// for validating inferred conditions.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"

namespace numloop {

struct SolveResult {
  // Canonically rendered answer substitutions, sorted; a multiset.
  std::vector<std::string> answers;
  bool hit_bound = false;
  // Flagged evaluation problems (instantiation errors, division by zero);
  // the affected branches fail.
  std::vector<std::string> diagnostics;
};

// Runs the query (a conjunction of atoms) against the program with the
// given step budget. Each successful head unification and each builtin
// evaluation costs one step; exhausting the budget sets hit_bound and stops
// the search, so hit_bound = false guarantees the LD-tree was finite.
SolveResult ld_solve(const Program& p, const std::vector<Atom>& query, long step_bound);

struct ComparisonReport {
  size_t queries = 0;
  std::vector<std::string> mismatches;  // rendered witness queries
  bool passed() const { return mismatches.empty(); }
};

// Compares answer multisets and bound status of the two programs on every
// query. When both runs hit the bound the answer prefixes are not compared
// (a budget truncation is not part of either program's semantics).
ComparisonReport compare_semantics(const Program& p, const Program& pag,
                                   const std::vector<std::vector<Atom>>& queries,
                                   long bound);

struct ValidationReport {
  size_t checked = 0;   // tuples satisfying the condition
  size_t skipped = 0;   // tuples outside the condition
  std::vector<std::string> violations;  // queries that hit the bound
  bool passed() const { return violations.empty(); }
};

// Sweeps every integer tuple in [lo,hi]^k over the query's integer
// positions; each tuple satisfying the condition must exhaust its LD-tree
// within the budget. Non-integer positions must not exist (the caller
// restricts to fully-integer queries).
ValidationReport validate_condition(const Program& p, const PredRef& query,
                                    const Cond& condition, Int lo, Int hi, long bound);

// Floor integer division (toward negative infinity), shared with the
// builtin evaluator so relation tests can cross-check it.
Int floor_div(const Int& a, const Int& b);

}  // namespace numloop
