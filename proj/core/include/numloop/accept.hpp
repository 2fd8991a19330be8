// Acceptability machinery: level-map templates over adornment conjuncts,
// decrease obligations with their context approximation of the answer
// substitution, the Farkas reduction to a linear system over nonnegative
// coefficients and multipliers, solving, and condition proposal.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "numloop/adorn.hpp"
#include "numloop/ast.hpp"
#include "numloop/interarg.hpp"
#include "numloop/lincon.hpp"
#include "numloop/prep.hpp"
#include "numloop/simplex.hpp"

namespace numloop {

// Identifies one symbolic coefficient: the row-th conjunct of the owner's
// adornment. Ordered by (owner, row) so systems print deterministically.
struct CoefSym {
  std::string owner;  // adorned predicate key
  size_t row = 0;
  auto operator<=>(const CoefSym&) const = default;
};

struct LevelTemplate {
  std::string owner;              // adorned predicate key
  std::vector<LinForm> prims;     // primitive per conjunct, over denominators
};

// One coefficient per conjunct when the adornment is a single conjunction;
// empty (the zero level mapping) for proper disjunctions and for predicates
// without an adornment.
LevelTemplate level_template(const std::string& adorned_key, const Cond& adornment);

struct DecreaseObligation {
  size_t clause_idx = 0;     // index into the adorned program
  size_t body_pos = 0;       // position of the recursive call
  std::string head_pred;     // adorned head key
  std::string callee_pred;   // adorned callee key
  Conj context;              // over clause variables, satisfiable
  // Instantiated primitives: per head-template term and callee-template
  // term, the primitive applied to the head/call arguments.
  std::vector<std::pair<CoefSym, LinForm>> head_form;
  std::vector<std::pair<CoefSym, LinForm>> call_form;
  // Head integer-position variables mapped to the base predicate's
  // denominators; proposal projection keeps exactly these variables.
  std::map<Sym, Sym> head_denoms;
};

// One obligation per (clause, body call) pair whose callee is mutually
// recursive with the clause head in the adorned program, per satisfiable
// disjunct of the context. The context conjoins the head adornment instance
// with, for every earlier body literal: its builtin relation (linear only),
// the adornment instance of an in-class call, or the declared relation of an
// out-of-class call. Unsatisfiable contexts are dropped as vacuous.
std::vector<DecreaseObligation> decrease_obligations(
    const AdornedProgram& pa, const PosMap& pm, const InterArgRegistry& reg,
    const std::map<std::string, LevelTemplate>& templates,
    const std::vector<size_t>& clause_filter);

// The Farkas system: for every obligation,
//   head_form - call_form - 1 = sum(lambda_m * context_m) + slack
// as a polynomial identity over the clause variables; coefficient matching
// yields equations linear in the coefficient symbols and multipliers, all of
// which are constrained nonnegative.
struct ConstraintSystem {
  std::vector<CoefSym> coeffs;          // global order
  LinearProgram lp;                     // coeffs first, then per-obligation lambdas and slack
  std::vector<std::string> var_names;   // printable name per lp variable
};

ConstraintSystem farkas_system(const std::vector<DecreaseObligation>& obls,
                               const std::map<std::string, LevelTemplate>& templates);

struct SolveOutcome {
  enum class Kind { Solved, NeedsCondition, Failed };
  Kind kind = Kind::Failed;
  std::map<CoefSym, Int> assignment;  // Solved: natural coefficients
  Cond proposal = Cond::bottom();     // NeedsCondition
  std::string proposal_pred;          // base predicate key of the proposal
};

// Feasibility via exact simplex (minimizing the coefficient sum, scaled to
// naturals); on infeasibility, tries propose_condition; otherwise Failed.
SolveOutcome solve(const ConstraintSystem& s,
                   const std::vector<DecreaseObligation>& obls,
                   const std::map<std::string, LevelTemplate>& templates,
                   const PosMap& pm);

// For each head-template term of each self-base obligation (deterministic
// order: template term, then obligation), the residual
//   R = prim(head args) - prim(call args)
// is conjoined as R >= 1 with the context and projected onto the head's
// integer variables; rows already entailed by the context's own projection
// are dropped. The first projection that survives, is satisfiable together
// with the context projection, and mentions a denominator becomes the
// proposal (over the head base predicate's denominators).
std::optional<std::pair<Cond, std::string>> propose_condition(
    const std::vector<DecreaseObligation>& obls,
    const std::map<std::string, LevelTemplate>& templates, const PosMap& pm);

// Whether this obligation's system is infeasible even in isolation; used to
// blame specific adornments on failure.
bool solo_infeasible(const DecreaseObligation& o,
                     const std::map<std::string, LevelTemplate>& templates);

// Renders the system one equation per line for --emit-constraints.
std::string render_system(const ConstraintSystem& s);

}  // namespace numloop
