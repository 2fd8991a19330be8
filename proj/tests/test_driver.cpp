// End-to-end inference: the full driver loop over the sample corpus, with
// statuses, rounds, proposals, banking, and solved-round certificates.
#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "numloop/driver.hpp"
#include "numloop/parse.hpp"
#include "numloop/print.hpp"
#include "util.hpp"

using namespace numloop;
using testutil::cond;

namespace {

Program load_sample(const std::string& name) {
  std::ifstream in(std::string(SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

TerminationReport run(const std::string& sample, const InferOpts& opts = {}) {
  Program p = load_sample(sample);
  PredRef q = *p.analyze_target();
  return infer(p, q, opts);
}

// Disjunction of the adornments holding the given status.
Cond region_with(const TerminationReport& rep, AdornmentStatus st) {
  Cond out = Cond::bottom();
  for (const auto& o : rep.outcomes)
    if (o.status == st) out = disj_cond(out, o.adornment);
  return out;
}

size_t count_with(const TerminationReport& rep, AdornmentStatus st) {
  return static_cast<size_t>(
      std::count_if(rep.outcomes.begin(), rep.outcomes.end(),
                    [&](const AdornmentOutcome& o) { return o.status == st; }));
}

bool event_logged(const TerminationReport& rep, const std::string& text) {
  for (const auto& t : rep.trace)
    for (const auto& e : t.events)
      if (e == text) return true;
  return false;
}

}  // namespace

TEST(Driver, CountupTerminatesEverywhere) {
  TerminationReport rep = run("countup.pl");
  EXPECT_TRUE(rep.condition.is_top());
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_FALSE(rep.limit_hit);

  ASSERT_EQ(rep.outcomes.size(), 2u);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenAcceptable),
                         cond("$1 =< 6", "p/1")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenNonrecursive),
                         cond("$1 >= 7", "p/1")));
  for (const auto& o : rep.outcomes) EXPECT_TRUE(o.under.is_top());

  ASSERT_EQ(rep.trace.size(), 1u);
  EXPECT_FALSE(rep.trace[0].solved_coeffs.empty());
  ASSERT_EQ(rep.trace[0].certificates.size(), 1u);
}

TEST(Driver, QSimpleSplitsLoopRegion) {
  TerminationReport rep = run("q_simple.pl");
  EXPECT_EQ(render_cond(rep.condition), "$1 =< 0 \\/ $1 >= 6");
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_FALSE(rep.limit_hit);

  ASSERT_EQ(rep.outcomes.size(), 3u);
  EXPECT_EQ(count_with(rep, AdornmentStatus::ProvenNonrecursive), 2u);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenNonrecursive),
                         cond("$1 =< 0 \\/ $1 >= 6", "q/1")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::Unknown),
                         cond("$1 >= 1 /\\ $1 =< 5", "q/1")));
  // Nothing was solved, so no round carries certificates.
  for (const auto& t : rep.trace) EXPECT_TRUE(t.certificates.empty());
}

TEST(Driver, GcdlikeRefinesOverTwoRounds) {
  TerminationReport rep = run("gcdlike.pl");
  EXPECT_EQ(render_cond(rep.condition), "$2 >= $1 \\/ $2 >= 0");
  EXPECT_EQ(rep.rounds, 2);
  ASSERT_EQ(rep.trace.size(), 2u);

  // Round 1: the exit cell resolves, the loop cell needs a condition.
  EXPECT_TRUE(event_logged(rep, "proposed condition on q/2: $2 >= 0"));
  EXPECT_TRUE(rep.trace[0].certificates.empty());

  // Round 2: solved, with a positive coefficient on the loop-progress row
  // ($1 >= $2 + 1 sorts first in the cell) and zero on the proposed row.
  const std::string cell = "q{$1 >= $2 + 1 /\\ $2 >= 0}/2";
  ASSERT_FALSE(rep.trace[1].solved_coeffs.empty());
  EXPECT_EQ(rep.trace[1].solved_coeffs.at(CoefSym{cell, 0}), 1);
  EXPECT_EQ(rep.trace[1].solved_coeffs.at(CoefSym{cell, 1}), 0);

  ASSERT_EQ(rep.trace[1].certificates.size(), 1u);
  const Certificate& cert = rep.trace[1].certificates[0];
  EXPECT_EQ(cert.head_pred, cell);
  // margin = (X - Y - 1) - (Z - Y1 - 1) - 1 with the unit coefficient.
  LinForm margin;
  margin.coeff[Sym::var("X")] = 1;
  margin.coeff[Sym::var("Y")] = -1;
  margin.coeff[Sym::var("Z")] = -1;
  margin.coeff[Sym::var("Y1")] = 1;
  margin.constant = -1;
  EXPECT_EQ(cert.margin, margin);

  // Final partition: four cells, the banked round-1 exit upgrading the cell
  // outside the accumulated condition.
  ASSERT_EQ(rep.outcomes.size(), 4u);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenAcceptable),
                         cond("$1 >= $2 + 1 /\\ $2 >= 0", "q/2")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenNonrecursive),
                         cond("$2 >= $1", "q/2")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::Unknown),
                         cond("$1 >= $2 + 1 /\\ $2 =< -1", "q/2")));
  for (const auto& o : rep.outcomes)
    if (o.status == AdornmentStatus::ProvenAcceptable)
      EXPECT_TRUE(equivalent(o.under, cond("$2 >= 0", "q/2")));
}

TEST(Driver, PermutedNeedsTheExtensionStep) {
  TerminationReport rep = run("permuted.pl");
  EXPECT_TRUE(rep.condition.is_top());
  EXPECT_EQ(rep.rounds, 1);

  ASSERT_EQ(rep.outcomes.size(), 3u);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenAcceptable),
                         cond("$1 =< -1 /\\ $2 =< -2", "p/2")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenNonrecursive),
                         cond("$1 >= 0 \\/ $2 >= -1", "p/2")));

  // The swap needs both argument slots in the level map.
  const std::string cell = "p{$1 =< -1 /\\ $2 =< -2}/2";
  ASSERT_EQ(rep.trace[0].certificates.size(), 1u);
  EXPECT_EQ(rep.trace[0].solved_coeffs.at(CoefSym{cell, 0}), 1);
  EXPECT_EQ(rep.trace[0].solved_coeffs.at(CoefSym{cell, 1}), 1);
}

TEST(Driver, PermutedWithoutExtensionStalls) {
  InferOpts opts;
  opts.extend = false;
  TerminationReport rep = run("permuted.pl", opts);
  EXPECT_EQ(render_cond(rep.condition), "$1 >= 0");
  EXPECT_EQ(rep.rounds, 2);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenNonrecursive),
                         cond("$1 >= 0", "p/2")));
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::Unknown),
                         cond("$1 =< -1", "p/2")));
}

TEST(Driver, GuardedLeavesTrueLoopUnknown) {
  TerminationReport rep = run("guarded.pl");
  EXPECT_EQ(render_cond(rep.condition), "$1 =< 10");
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_TRUE(
      event_logged(rep, "obligation infeasible in isolation for r{$1 >= 11}/1"));
  EXPECT_EQ(count_with(rep, AdornmentStatus::ProvenNonrecursive), 2u);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::Unknown),
                         cond("$1 >= 11", "r/1")));
}

TEST(Driver, MutualRecursionResolvesAcrossTheClass) {
  TerminationReport rep = run("mutual.pl");
  EXPECT_TRUE(rep.condition.is_top());
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_TRUE(equivalent(region_with(rep, AdornmentStatus::ProvenAcceptable),
                         cond("$1 >= 1", "p/1")));
}

TEST(Driver, DeclaredRelationMakesHelperTransparent) {
  TerminationReport rep = run("interarg_demo.pl");
  EXPECT_TRUE(rep.condition.is_top());
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_FALSE(rep.trace[0].certificates.empty());
}

TEST(Driver, OscillateKeepsOnlyTrivialRegions) {
  TerminationReport rep = run("oscillate.pl");
  // Nonlinear updates leave the loop cells unprovable; the condition is the
  // (sound) region that never enters them.
  EXPECT_EQ(render_cond(rep.condition),
            "$1 =< -1000 \\/ $1 =< 1 /\\ $1 >= -1 \\/ $1 >= 1000");
  EXPECT_TRUE(equivalent(
      region_with(rep, AdornmentStatus::Unknown),
      cond("$1 =< -2 /\\ $1 >= -999 \\/ $1 =< 999 /\\ $1 >= 2", "p/1")));
  for (const auto& t : rep.trace) EXPECT_TRUE(t.certificates.empty());
}

TEST(Driver, IterationLimitIsHonoured) {
  InferOpts opts;
  opts.max_iter = 1;
  Program p = load_sample("gcdlike.pl");
  TerminationReport rep = infer(p, *p.analyze_target(), opts);
  EXPECT_EQ(rep.rounds, 1);
  EXPECT_TRUE(rep.limit_hit);
  // Only the round-1 bank survives: the non-recursive exit region.
  EXPECT_TRUE(equivalent(rep.condition, cond("$2 >= $1", "q/2")));
  ASSERT_FALSE(rep.trace.empty());
  const auto& events = rep.trace.back().events;
  EXPECT_NE(std::find(events.begin(), events.end(), "iteration limit reached"),
            events.end());
}

TEST(Driver, EmitConstraintsFillsSystemDump) {
  InferOpts opts;
  opts.emit_constraints = true;
  Program p = load_sample("q_simple.pl");
  TerminationReport rep = infer(p, *p.analyze_target(), opts);
  ASSERT_EQ(rep.trace.size(), 1u);
  EXPECT_NE(rep.trace[0].system_dump.find("l0_0 - l0_1 = 0"), std::string::npos);
  EXPECT_NE(rep.trace[0].system_dump.find("minimize:"), std::string::npos);
}
