// Preparation passes: integer-argument-position identification, partial
// normalisation of heads, maximal-prefix extraction, and the predicate
// dependency graph.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"

namespace numloop {

// Predicate key ("name/arity") -> set of 1-based integer argument positions.
using PosMap = std::map<std::string, std::set<int>>;

// Union of declared positions (`:- intpos`, plus positions mentioned by
// `:- interarg` conditions) and a syntactic least fixpoint: a position is
// integer when every occurrence of the predicate holds an integer constant
// or a variable that appears in an arithmetic literal of the same clause or
// at an already-integer position. A compound term anywhere blocks inference;
// at a declared position it is an error.
PosMap integer_positions(const Program& p);

// Rewrites every head so its integer positions hold pairwise-distinct
// variables; displaced constants and duplicates come back as a leading
// `V >= t, V =< t` pair. Idempotent, semantics-preserving.
Program partially_normalise(const Program& p, const PosMap& pm);

struct PrefixInfo {
  size_t clause_id = 0;
  // Number of leading body literals that are linear integer comparisons
  // over the head's integer-position variables.
  size_t prefix_len = 0;
  // Their conjunction with head variables replaced by denominators.
  Cond condition = Cond::top();
};

// The clause must be partially normalised (head integer positions distinct
// variables); the condition is over the head predicate's denominators.
PrefixInfo maximal_prefix(const Clause& c, size_t clause_id, const PosMap& pm);

struct DependencyGraph {
  std::vector<std::string> preds;             // all predicate keys
  std::map<std::string, int> scc_of;          // pred key -> SCC id
  std::map<std::string, std::set<std::string>> calls;  // direct edges
  std::set<std::string> recursive;            // preds in a cyclic SCC

  bool same_class(const std::string& a, const std::string& b) const;
  bool is_recursive(const std::string& pred) const;
  // Reflexive-transitive reachability along call edges.
  bool depends_on(const std::string& from, const std::string& to) const;
  std::vector<std::string> class_of(const std::string& pred) const;
  std::set<std::string> reachable_from(const std::string& pred) const;
};

DependencyGraph dependency_graph(const Program& p);

}  // namespace numloop
