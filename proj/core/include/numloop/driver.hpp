// The inference loop: builds adornment sets from guard pools, adorns,
// shortcuts non-recursive adornments, synthesizes level mappings, iterates
// on proposed conditions, and assembles the final termination condition.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "numloop/accept.hpp"
#include "numloop/adorn.hpp"
#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"
#include "numloop/prep.hpp"

namespace numloop {

enum class AdornmentStatus { ProvenNonrecursive, ProvenAcceptable, Pending, Unknown };

const char* status_text(AdornmentStatus s);

// Instantiated decrease witness from a solved round: `margin` (the level of
// the head minus the level of the call minus one, with the solved
// coefficients substituted) must be nonnegative on every integer model of
// `context`. Both range over the clause's variables.
struct Certificate {
  std::string head_pred;  // adorned head key of the witnessing obligation
  Conj context;
  LinForm margin;
};

struct RoundTrace {
  int round = 0;
  std::map<std::string, std::vector<Cond>> adornment_sets;  // per class pred
  size_t adorned_clauses = 0;
  size_t bridges = 0;
  size_t obligations = 0;
  std::vector<std::string> events;  // human-readable outcome log
  std::string system_dump;          // filled when opts.emit_constraints
  std::map<CoefSym, Int> solved_coeffs;  // level-map coefficients when solved
  std::vector<Certificate> certificates;
};

struct AdornmentOutcome {
  Cond adornment = Cond::bottom();
  AdornmentStatus status = AdornmentStatus::Unknown;
  Cond under = Cond::top();  // accumulated condition when resolved
};

struct TerminationReport {
  PredRef query;
  Cond condition = Cond::bottom();
  // Final-round partition of the query's argument space with outcomes.
  std::vector<AdornmentOutcome> outcomes;
  int rounds = 0;
  bool limit_hit = false;
  std::vector<RoundTrace> trace;
};

struct InferOpts {
  bool extend = true;
  std::optional<int> max_iter;  // default: 2 x integer positions of the class
  bool emit_constraints = false;
};

// Adornments of the query predicate from which every reachable predicate in
// the adorned program is non-recursive; such cases terminate outright.
std::vector<Cond> proven_by_nonrecursion(const AdornedProgram& pa,
                                         const std::string& query_key,
                                         const std::vector<Cond>& adornments);

TerminationReport infer(const Program& p, const PredRef& query, const InferOpts& opts);

// One adornment pass (round-1 pools) for the `adorn` subcommand and the
// preservation tests: the transformed program plus bridges.
AdornedProgram adorn_once(const Program& p, const PredRef& query, bool extend);

}  // namespace numloop
