// Ground-truth interpreter tests. Expected answers are derived by hand from
// depth-first left-to-right resolution with textual clause order; the suite
// freezes them so analysis changes can never silently bend the semantics.
#include <gtest/gtest.h>

#include <algorithm>

#include "numloop/oracle.hpp"
#include "numloop/parse.hpp"
#include "util.hpp"

using namespace numloop;
using testutil::atom;
using testutil::query;

namespace {

const char* kLoopOrAnswer = R"(
q(X) :- X > 0, X =< 5, q(X).
q(X) :- X > -5.
)";

Program parse(const std::string& text) { return parse_program(text); }

}  // namespace

TEST(Oracle, LoopingCallHitsBound) {
  Program p = parse(kLoopOrAnswer);
  SolveResult r = ld_solve(p, query("q", {3}), 1000000);
  EXPECT_TRUE(r.hit_bound);
  // The infinite leftmost descent starves the second clause.
  EXPECT_TRUE(r.answers.empty());
}

TEST(Oracle, NonLoopingCallExhaustsTree) {
  Program p = parse(kLoopOrAnswer);
  SolveResult r = ld_solve(p, query("q", {7}), 10000);
  EXPECT_FALSE(r.hit_bound);
  ASSERT_EQ(r.answers.size(), 1u);
  EXPECT_EQ(r.answers[0], "yes");
}

TEST(Oracle, FailingCallHasNoAnswers) {
  Program p = parse(kLoopOrAnswer);
  SolveResult r = ld_solve(p, query("q", {-10}), 10000);
  EXPECT_FALSE(r.hit_bound);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Oracle, EmptyProgramFailsFinitely) {
  Program p = parse("");
  SolveResult r = ld_solve(p, query("q", {1}), 100);
  EXPECT_FALSE(r.hit_bound);
  EXPECT_TRUE(r.answers.empty());
}

TEST(Oracle, ComparisonOnUnboundVarDiagnosesAndFails) {
  Program p = parse(kLoopOrAnswer);
  Atom a;
  a.pred = "q";
  a.args.push_back(Term::var("X"));
  SolveResult r = ld_solve(p, {a}, 1000);
  EXPECT_FALSE(r.hit_bound);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Oracle, RecursiveSumComputesBinding) {
  // f(n, r): r = 0 + 1 + ... + n.
  Program p = parse(R"(
f(X, Y) :- X > 0, X1 is X - 1, f(X1, Z), Y is Z + X.
f(X, Y) :- X =< 0, Y is 0.
)");
  Atom a;
  a.pred = "f";
  a.args.push_back(Term::integer(Int(3)));
  a.args.push_back(Term::var("R"));
  SolveResult r = ld_solve(p, {a}, 10000);
  EXPECT_FALSE(r.hit_bound);
  ASSERT_EQ(r.answers.size(), 1u);
  EXPECT_EQ(r.answers[0], "R = 6");
}

TEST(Oracle, AnswersAreAMultiset) {
  Program p = parse(R"(
m(X) :- X > 0.
m(X) :- X > -1.
)");
  SolveResult r = ld_solve(p, query("m", {5}), 1000);
  EXPECT_FALSE(r.hit_bound);
  // Both clauses succeed; duplicates must be preserved.
  EXPECT_EQ(r.answers, (std::vector<std::string>{"yes", "yes"}));
}

TEST(Oracle, FloorDivision) {
  EXPECT_EQ(floor_div(Int(7), Int(3)), Int(2));
  EXPECT_EQ(floor_div(Int(-7), Int(3)), Int(-3));
  EXPECT_EQ(floor_div(Int(7), Int(-3)), Int(-3));
  EXPECT_EQ(floor_div(Int(-7), Int(-3)), Int(2));
  EXPECT_EQ(floor_div(Int(-6), Int(3)), Int(-2));
  EXPECT_EQ(floor_div(Int(6), Int(3)), Int(2));

  Program p = parse("g(X, Y) :- Y is X div 3.");
  Atom a;
  a.pred = "g";
  a.args.push_back(Term::integer(Int(-7)));
  a.args.push_back(Term::var("R"));
  SolveResult r = ld_solve(p, {a}, 100);
  ASSERT_EQ(r.answers.size(), 1u);
  EXPECT_EQ(r.answers[0], "R = -3");
}

TEST(Oracle, DivisionByZeroDiagnosesAndFails) {
  Program p = parse("g(X, Y) :- Y is X div 0.");
  Atom a;
  a.pred = "g";
  a.args.push_back(Term::integer(Int(1)));
  a.args.push_back(Term::var("R"));
  SolveResult r = ld_solve(p, {a}, 100);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_FALSE(r.diagnostics.empty());
  EXPECT_FALSE(r.hit_bound);
}

TEST(Oracle, OccursCheckRejectsCyclicBinding) {
  // Unifying s(Y, Y) against the head binds X = f(X) unless rejected.
  Program p = parse("s(f(X), X).");
  Atom a;
  a.pred = "s";
  a.args.push_back(Term::var("Y"));
  a.args.push_back(Term::var("Y"));
  SolveResult r = ld_solve(p, {a}, 100);
  EXPECT_TRUE(r.answers.empty());
  EXPECT_FALSE(r.hit_bound);
}

TEST(Oracle, CompoundAnswersRenderCanonically) {
  Program p = parse("c(f(A, g(B)), A).");
  Atom a;
  a.pred = "c";
  a.args.push_back(Term::var("X"));
  a.args.push_back(Term::integer(Int(4)));
  SolveResult r = ld_solve(p, {a}, 100);
  ASSERT_EQ(r.answers.size(), 1u);
  // Free clause variables are renamed in order of appearance.
  EXPECT_EQ(r.answers[0], "X = f(4, g(_A))");
}

TEST(Oracle, BudgetMonotonicity) {
  // First clause answers immediately, second loops forever: every budget
  // large enough to reach the answer reports it, and growing the budget can
  // only extend (never change) what was already found.
  Program p = parse(R"(
w(X) :- X > -100.
w(X) :- w(X).
)");
  std::vector<std::string> prev;
  for (long bound : {1L, 2L, 5L, 10L, 100L, 1000L}) {
    SolveResult r = ld_solve(p, query("w", {5}), bound);
    EXPECT_TRUE(r.hit_bound);  // the second clause never stops
    EXPECT_TRUE(std::includes(r.answers.begin(), r.answers.end(), prev.begin(),
                              prev.end()))
        << "bound " << bound << " lost answers";
    prev = r.answers;
  }
  // Backtracking into the looping clause keeps re-deriving the first
  // answer, so the answer multiset grows with the budget.
  EXPECT_GE(prev.size(), 2u);
}

TEST(Oracle, DeterministicAcrossRuns) {
  Program p = parse(kLoopOrAnswer);
  SolveResult a = ld_solve(p, query("q", {7}), 512);
  SolveResult b = ld_solve(p, query("q", {7}), 512);
  EXPECT_EQ(a.answers, b.answers);
  EXPECT_EQ(a.hit_bound, b.hit_bound);
}

TEST(Oracle, BuiltinComparisonsAgreeWithIntegers) {
  // One program per operator; query values sweep a small grid.
  struct Case {
    const char* text;
    bool (*truth)(long, long);
  };
  const Case cases[] = {
      {"t(X, Y) :- X < Y.", [](long x, long y) { return x < y; }},
      {"t(X, Y) :- X > Y.", [](long x, long y) { return x > y; }},
      {"t(X, Y) :- X =< Y.", [](long x, long y) { return x <= y; }},
      {"t(X, Y) :- X >= Y.", [](long x, long y) { return x >= y; }},
      {"t(X, Y) :- X = Y.", [](long x, long y) { return x == y; }},
  };
  for (const Case& c : cases) {
    Program p = parse(c.text);
    for (long x = -3; x <= 3; ++x)
      for (long y = -3; y <= 3; ++y) {
        SolveResult r = ld_solve(p, query("t", {x, y}), 100);
        EXPECT_EQ(r.answers.size(), c.truth(x, y) ? 1u : 0u)
            << c.text << " at (" << x << ", " << y << ")";
      }
  }
}

TEST(Oracle, CompareSemanticsFlagsAnswerDrift) {
  Program p = parse("a(X) :- X > 0.");
  Program q = parse("a(X) :- X > 1.");
  std::vector<std::vector<Atom>> qs;
  for (long v = -2; v <= 2; ++v) qs.push_back(query("a", {v}));
  ComparisonReport same = compare_semantics(p, p, qs, 1000);
  EXPECT_TRUE(same.passed());
  EXPECT_EQ(same.queries, qs.size());
  ComparisonReport diff = compare_semantics(p, q, qs, 1000);
  EXPECT_FALSE(diff.passed());  // they disagree at a(1)
}

TEST(Oracle, CompareSemanticsIgnoresTruncatedRuns) {
  // Both programs loop forever on the query; answer prefixes may differ by
  // budget slicing, which must not count as a mismatch.
  Program p = parse(R"(
l(X) :- X > -100.
l(X) :- l(X).
)");
  Program q = parse(R"(
l(X) :- l(X).
l(X) :- X > -100.
)");
  std::vector<std::vector<Atom>> qs = {query("l", {0})};
  ComparisonReport rep = compare_semantics(p, q, qs, 50);
  EXPECT_TRUE(rep.passed());
}

TEST(Oracle, ValidateConditionSplitsByCondition) {
  Program p = parse(kLoopOrAnswer);
  // True termination region of q/1.
  Cond good = testutil::cond("$1 =< 0 \\/ $1 >= 6", "q/1");
  ValidationReport ok = validate_condition(p, PredRef{"q", 1}, good, Int(-10),
                                           Int(10), 100000);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.checked + ok.skipped, 21u);
  EXPECT_EQ(ok.skipped, 5u);  // 1..5 loop and are excluded by the condition

  Cond bad = testutil::cond("true", "q/1");
  ValidationReport violated = validate_condition(p, PredRef{"q", 1}, bad,
                                                 Int(-10), Int(10), 100000);
  EXPECT_FALSE(violated.passed());
  EXPECT_EQ(violated.violations.size(), 5u);
}
