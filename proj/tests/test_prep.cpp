// Preparation passes: integer-position inference, head normalisation,
// maximal prefixes, and the dependency graph.
#include <gtest/gtest.h>

#include "numloop/parse.hpp"
#include "numloop/prep.hpp"
#include "numloop/print.hpp"
#include "util.hpp"

using namespace numloop;

TEST(Prep, IntegerPositionsFromArithmetic) {
  Program p = parse_program("q(X, Y) :- X > 0, Y1 is Y + 1, q(X, Y1).");
  PosMap pm = integer_positions(p);
  EXPECT_EQ(pm["q/2"], (std::set<int>{1, 2}));
}

TEST(Prep, IntegerPositionsPropagateThroughCalls) {
  // A declared position justifies variables sitting at it elsewhere in the
  // same clause, so p/2's first position is inferred through the lib call.
  Program p = parse_program(R"(
lib(X, Y).
p(A, B) :- lib(A, B), p(A, B).
:- intpos(lib/2, [1]).
)");
  PosMap pm = integer_positions(p);
  EXPECT_EQ(pm["lib/2"], (std::set<int>{1}));
  EXPECT_EQ(pm["p/2"], (std::set<int>{1}));
}

TEST(Prep, BareCallChainsStayUninferred) {
  // Inference needs evidence at every occurrence; a call that passes a
  // variable with no arithmetic around it provides none, so nothing is
  // inferred for either predicate.
  Program p = parse_program(R"(
h(Y) :- Y > 0.
g(X) :- h(X).
)");
  PosMap pm = integer_positions(p);
  EXPECT_EQ(pm.count("h/1"), 0u);
  EXPECT_EQ(pm.count("g/1"), 0u);
}

TEST(Prep, CompoundBlocksInference) {
  Program p = parse_program("t(f(X), Y) :- Y > 0.");
  PosMap pm = integer_positions(p);
  EXPECT_EQ(pm["t/2"], (std::set<int>{2}));
}

TEST(Prep, DeclaredPositionsAreUnioned) {
  Program p = parse_program(R"(
u(X, Y) :- v(X, Y).
v(X, Y) :- w(X, Y).
w(X, Y).
:- intpos(u/2, [2]).
)");
  PosMap pm = integer_positions(p);
  EXPECT_TRUE(pm["u/2"].count(2));
}

TEST(Prep, NormaliseIntroducesEqualityPrefix) {
  Program p = parse_program("q(3) :- q(3).");
  PosMap pm;
  pm["q/1"] = {1};
  Program n = partially_normalise(p, pm);
  ASSERT_EQ(n.clauses.size(), 1u);
  const Clause& c = n.clauses[0];
  // Head got a fresh variable; the constant moved into a leading =< / >= pair.
  ASSERT_EQ(c.head.args.size(), 1u);
  EXPECT_EQ(c.head.args[0]->kind, Term::Kind::Var);
  ASSERT_GE(c.body.size(), 3u);
  EXPECT_EQ(c.body[0].kind, Literal::Kind::Compare);
  EXPECT_EQ(c.body[1].kind, Literal::Kind::Compare);
  // Idempotent.
  Program again = partially_normalise(n, pm);
  EXPECT_EQ(render_program(again), render_program(n));
}

TEST(Prep, NormaliseSplitsDuplicateVariables) {
  Program p = parse_program("q(X, X) :- X > 0.");
  PosMap pm;
  pm["q/2"] = {1, 2};
  Program n = partially_normalise(p, pm);
  const Clause& c = n.clauses[0];
  ASSERT_EQ(c.head.args.size(), 2u);
  ASSERT_EQ(c.head.args[0]->kind, Term::Kind::Var);
  ASSERT_EQ(c.head.args[1]->kind, Term::Kind::Var);
  EXPECT_NE(c.head.args[0]->name, c.head.args[1]->name);
}

TEST(Prep, MaximalPrefixStopsAtFirstNonComparison) {
  Program p = parse_program("q(X, Y) :- X > 0, Y =< 5, Z is X + Y, X < Y, q(Z, Y).");
  PosMap pm = integer_positions(p);
  PrefixInfo info = maximal_prefix(p.clauses[0], 0, pm);
  EXPECT_EQ(info.prefix_len, 2u);  // the `is` ends the prefix
  EXPECT_EQ(render_cond(info.condition),
            render_cond(testutil::cond("$1 >= 1 /\\ $2 =< 5", "q/2")));
}

TEST(Prep, MaximalPrefixRequiresHeadVariables) {
  // The second comparison mentions Z, which is not a head variable.
  Program p = parse_program("q(X) :- X > 0, Z < 5, q(X).");
  PosMap pm = integer_positions(p);
  PrefixInfo info = maximal_prefix(p.clauses[0], 0, pm);
  EXPECT_EQ(info.prefix_len, 1u);
  EXPECT_EQ(render_cond(info.condition), "$1 >= 1");
}

TEST(Prep, NonlinearComparisonEndsPrefix) {
  Program p = parse_program("q(X) :- X * X > 0, q(X).");
  PosMap pm = integer_positions(p);
  PrefixInfo info = maximal_prefix(p.clauses[0], 0, pm);
  EXPECT_EQ(info.prefix_len, 0u);
  EXPECT_TRUE(info.condition.is_top());
}

TEST(Prep, DependencyGraphSccs) {
  Program p = parse_program(R"(
a(X) :- b(X).
b(X) :- a(X).
b(X) :- c(X).
c(X) :- X > 0.
d(X) :- d(X).
e(X) :- X > 1.
)");
  DependencyGraph g = dependency_graph(p);
  EXPECT_TRUE(g.same_class("a/1", "b/1"));
  EXPECT_FALSE(g.same_class("a/1", "c/1"));
  EXPECT_TRUE(g.is_recursive("a/1"));
  EXPECT_TRUE(g.is_recursive("b/1"));
  EXPECT_FALSE(g.is_recursive("c/1"));
  EXPECT_TRUE(g.is_recursive("d/1"));   // direct self-loop
  EXPECT_FALSE(g.is_recursive("e/1"));  // no calls at all
  EXPECT_TRUE(g.depends_on("a/1", "c/1"));
  EXPECT_FALSE(g.depends_on("c/1", "a/1"));
  EXPECT_EQ(g.reachable_from("a/1"),
            (std::set<std::string>{"a/1", "b/1", "c/1"}));
}

TEST(Prep, DependencyGraphLongChain) {
  // Regression: nodes without outgoing edges and deep chains must not stall
  // the iterative SCC walk.
  std::string text;
  for (int i = 0; i < 50; ++i)
    text += "p" + std::to_string(i) + "(X) :- p" + std::to_string(i + 1) + "(X).\n";
  Program p = parse_program(text);
  DependencyGraph g = dependency_graph(p);
  EXPECT_TRUE(g.depends_on("p0/1", "p50/1"));
  EXPECT_FALSE(g.is_recursive("p0/1"));
  EXPECT_EQ(g.preds.size(), 51u);
}
