// Adornment machinery: guard collection, guard-tuned set construction, the
// condition-extension fixpoint, the adornment transformation with its weak
// consistency check, bridge clauses, and irrelevant-clause removal.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "numloop/ast.hpp"
#include "numloop/interarg.hpp"
#include "numloop/lincon.hpp"
#include "numloop/prep.hpp"

namespace numloop {

// Prefix conditions of the clauses defining `pred_key`, trivial ones
// dropped, deduplicated, canonically ordered. The program must be partially
// normalised.
std::vector<Cond> collect_guards(const Program& p, const std::string& pred_key,
                                 const PosMap& pm);

// All sign-combinations of the given conditions, simplified, unsatisfiable
// members dropped. The result partitions the argument space and is
// guard-tuned by construction. Throws CapacityError for more than 16
// conditions.
std::vector<Cond> guard_tuned_set(const std::vector<Cond>& conds);

// yes iff every adornment either contradicts or entails every defining
// clause's prefix condition.
bool is_guard_tuned(const std::vector<Cond>& adornments, const Program& p,
                    const std::string& pred_key, const PosMap& pm);

// The extension fixpoint: for each clause and each in-class body call
// carrying a pool condition, derives the weakest head precondition (call
// condition instantiated, conjoined with the prefix and the fresh linear
// is-equalities and declared relations of earlier calls, non-head variables
// eliminated) and adds it when it constrains a denominator the pool does not
// constrain yet. Returns the extended pools.
std::map<std::string, std::vector<Cond>> extend_adornments(
    const std::map<std::string, std::vector<Cond>>& pools, const Program& p,
    const PosMap& pm, const DependencyGraph& dg, const InterArgRegistry& reg,
    const std::vector<std::string>& cls);

struct AdornedProgram {
  Program program;                  // the transformed clauses (no bridges)
  std::vector<Clause> bridges;      // p(X...) :- p{A}(X...)
  std::vector<size_t> provenance;   // transformed clause -> original clause
  // Adorned predicate key -> (base key, adornment).
  std::map<std::string, std::pair<std::string, Cond>> adorned_preds;
};

// The adornment transformation. Step 1 replaces every body call to an
// in-class predicate by one copy per adornment (cartesian product). Step 2
// keeps an in-class clause only when head adornment, maximal prefix, fresh
// linear is-equalities, and the body calls' adornment instances are
// satisfiable together (the weak check; literals beyond the prefix are never
// consulted). Out-of-class clauses keep their heads.
AdornedProgram adorn_program(const Program& p,
                             const std::map<std::string, std::vector<Cond>>& sets,
                             const std::string& target_key, const PosMap& pm,
                             const DependencyGraph& dg);

// One connecting clause per (in-class predicate, adornment) pair.
std::vector<Clause> bridge_clauses(const std::map<std::string, std::vector<Cond>>& sets,
                                   const std::vector<std::string>& cls);

// Keeps a clause only when some adornment of the query predicate consistent
// with `c` reaches the clause's head predicate in the adorned program.
AdornedProgram remove_irrelevant(const AdornedProgram& pa, const Cond& c,
                                 const std::string& query_key);

}  // namespace numloop
