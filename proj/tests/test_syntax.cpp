// Parser and renderer behavior: round-trips, desugaring, directives, and
// reported error positions.
#include <gtest/gtest.h>

#include "numloop/parse.hpp"
#include "numloop/print.hpp"
#include "util.hpp"

using namespace numloop;

TEST(Syntax, ClauseRoundTrip) {
  const std::string text =
      "q(X, Y) :- X > Y, Z is X - Y, Y1 is Y + 1, q(Z, Y1).";
  Program p = parse_program(text);
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(render_clause(p.clauses[0]), text);
  // The render re-parses to the same render (fixpoint).
  Program again = parse_program(render_program(p));
  EXPECT_EQ(render_program(again), render_program(p));
}

TEST(Syntax, FactsAndCompoundTerms) {
  Program p = parse_program("s(f(X), g(X, 3)).");
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_TRUE(p.clauses[0].body.empty());
  EXPECT_EQ(render_clause(p.clauses[0]), "s(f(X), g(X, 3)).");
}

TEST(Syntax, EqualityDesugarsToTwoComparisons) {
  Program p = parse_program("e(X, Y) :- X = Y + 1.");
  ASSERT_EQ(p.clauses.size(), 1u);
  ASSERT_EQ(p.clauses[0].body.size(), 2u);
  EXPECT_EQ(p.clauses[0].body[0].kind, Literal::Kind::Compare);
  EXPECT_EQ(p.clauses[0].body[1].kind, Literal::Kind::Compare);
  // One =< and one >= over the same operands.
  EXPECT_EQ(p.clauses[0].body[0].op, CmpOp::Le);
  EXPECT_EQ(p.clauses[0].body[1].op, CmpOp::Ge);
}

TEST(Syntax, CommentsAndNegativeLiterals) {
  Program p = parse_program(R"(
% a comment line
q(X) :- X > -5.  % trailing comment
)");
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(render_clause(p.clauses[0]), "q(X) :- X > -5.");
}

TEST(Syntax, DivKeyword) {
  Program p = parse_program("d(X, Y) :- Y is X div 2.");
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(render_clause(p.clauses[0]), "d(X, Y) :- Y is X div 2.");
}

TEST(Syntax, Directives) {
  Program p = parse_program(R"(
:- interarg(h/2, "$1 >= $2 + 1").
h(X, Y) :- Y is X - 1.
p(X) :- X > 0, h(X, Y), p(Y).
:- intpos(p/1, [1]).
:- analyze(p/1).
)");
  ASSERT_EQ(p.directives.size(), 3u);
  EXPECT_EQ(p.directives[0].kind, Directive::Kind::InterArg);
  EXPECT_EQ(p.directives[0].pred.key(), "h/2");
  EXPECT_EQ(p.directives[0].condition_text, "$1 >= $2 + 1");
  EXPECT_EQ(p.directives[1].kind, Directive::Kind::IntPos);
  EXPECT_EQ(p.directives[1].positions, (std::vector<int>{1}));
  ASSERT_TRUE(p.analyze_target().has_value());
  EXPECT_EQ(p.analyze_target()->key(), "p/1");
}

TEST(Syntax, MissingAnalyzeTargetIsDetectable) {
  Program p = parse_program("q(X) :- X > 0.");
  EXPECT_FALSE(p.analyze_target().has_value());
}

TEST(Syntax, ErrorsCarryPosition) {
  try {
    parse_program("q(X) :- X > .");
    FAIL() << "expected a parse error";
  } catch (const InputError& e) {
    EXPECT_EQ(e.line, 1);
    EXPECT_GT(e.column, 0);
  }
}

TEST(Syntax, ArityClashRejected) {
  EXPECT_THROW(parse_program("q(X) :- q(X, X)."), InputError);
}

TEST(Syntax, DirectiveOnUnknownPredicateRejected) {
  EXPECT_THROW(parse_program(":- analyze(nope/1)."), InputError);
}

TEST(Syntax, ConditionRoundTrip) {
  const PredRef q{"q", 2};
  for (const char* text : {
           "true",
           "false",
           "$1 >= 0",
           "$1 >= $2 + 1 /\\ $2 >= 0",
           "$2 >= $1 \\/ $2 >= 0",
           "$1 =< -5 \\/ $1 =< 0 /\\ $1 >= -4",
       }) {
    Cond c = parse_condition(text, q);
    EXPECT_EQ(render_cond(c), text) << text;
  }
}

TEST(Syntax, ConditionNormalizesStrictOps) {
  const PredRef q{"q", 1};
  // Strict comparisons shift by one; equal conditions render identically.
  EXPECT_EQ(render_cond(parse_condition("$1 > 5", q)), "$1 >= 6");
  EXPECT_EQ(render_cond(parse_condition("$1 < 5", q)), "$1 =< 4");
  EXPECT_EQ(render_cond(parse_condition("2*$1 >= 4", q)),
            render_cond(parse_condition("$1 >= 2", q)));
}

TEST(Syntax, ConditionRejectsNonlinear) {
  EXPECT_THROW(parse_condition("$1 * $1 >= 0", PredRef{"q", 1}), InputError);
}

TEST(Syntax, PrettyStrictRendering) {
  RenderOpts opts;
  opts.pretty_strict = true;
  Cond c = parse_condition("$1 >= 6", PredRef{"q", 1});
  EXPECT_EQ(render_cond(c, opts), "$1 > 5");
  Cond d = parse_condition("$1 =< -1", PredRef{"q", 1});
  EXPECT_EQ(render_cond(d, opts), "$1 < 0");
}

TEST(Syntax, AdornedNamesRoundTripThroughParser) {
  Cond a = parse_condition("$1 >= $2 + 1", PredRef{"q", 2});
  const std::string name = adorned_name("q", a);
  Program p = parse_program(name + "(X, Y) :- X > Y.");
  ASSERT_EQ(p.clauses.size(), 1u);
  EXPECT_EQ(p.clauses[0].head.pred, name);
}
