// Rendering of termination reports as text and JSON.
#pragma once

#include <string>

#include "numloop/driver.hpp"
#include "numloop/print.hpp"

namespace numloop {

// Outcome regions grouped by status: outcomes with the same status merge
// into one disjunctive condition (simplified). Deterministic order:
// proven_acceptable, proven_nonrecursive, unknown.
struct ReportGroup {
  std::string status;
  Cond condition;
};
std::vector<ReportGroup> grouped_outcomes(const TerminationReport& r);

std::string report_text(const TerminationReport& r, const RenderOpts& opts = {});

// {query, condition, adornments: [{condition, status}], rounds, limit_hit,
// trace}; condition strings re-parse to equivalent conditions.
std::string report_json(const TerminationReport& r, const RenderOpts& opts = {});

}  // namespace numloop
