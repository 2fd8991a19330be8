// numloop: termination condition inference for logic programs with integer arithmetic.
//
// Abstract syntax for the input language: Prolog-style clauses whose bodies mix
// predicate calls, integer comparisons and `is` bindings, plus the directives
// that drive the analysis.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace numloop {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown for malformed input (parse errors, arity clashes, bad directives).
// Distinct from CapacityError so the CLI can map them to different exit codes.
struct InputError : std::runtime_error {
  int line = 0, column = 0;
  InputError(std::string msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(std::move(msg)), line(line_), column(col_) {}
};

// Thrown when a configured blow-up limit is exceeded (projection row cap,
// guard-set width, ...). Maps to CLI exit code 2.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Terms and arithmetic expressions

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, IntConst, Compound };
  Kind kind;
  std::string name;           // Var: variable name; Compound: functor
  Int value;                  // IntConst
  std::vector<TermPtr> args;  // Compound

  static TermPtr var(std::string n);
  static TermPtr integer(Int v);
  static TermPtr compound(std::string functor, std::vector<TermPtr> args);
};

bool operator==(const Term& a, const Term& b);

// Arithmetic expressions as they appear in comparisons and `is` right-hand
// sides. Division is kept as a node; whether it is usable linearly is decided
// by the constraint layer (only constant-folded `div` is).
struct ArithExpr;
using ExprPtr = std::shared_ptr<const ArithExpr>;

struct ArithExpr {
  enum class Kind { Var, IntConst, Add, Sub, Mul, Div, Neg };
  Kind kind;
  std::string var;
  Int value;
  ExprPtr lhs, rhs;  // Neg uses lhs only

  static ExprPtr var_ref(std::string n);
  static ExprPtr integer(Int v);
  static ExprPtr binary(Kind k, ExprPtr l, ExprPtr r);
  static ExprPtr negate(ExprPtr e);
};

bool operator==(const ArithExpr& a, const ArithExpr& b);

// Linear in the syntactic sense: no product of two variable-containing
// subtrees and no division by a variable-containing subtree.
bool is_linear(const ArithExpr& e);
// All variable names mentioned in the expression, in first-occurrence order.
void collect_vars(const ArithExpr& e, std::vector<std::string>& out);

// ---------------------------------------------------------------------------
// Literals, clauses, programs

enum class CmpOp { Lt, Gt, Le, Ge };  // `=` is desugared to Le + Ge at parse

const char* cmp_op_text(CmpOp op);

struct Atom {
  std::string pred;  // possibly an adorned name, e.g. "q{$1 >= $2 + 1}"
  std::vector<TermPtr> args;
};

struct Literal {
  enum class Kind { Call, Compare, Is };
  Kind kind;
  Atom call;                 // Call
  CmpOp op = CmpOp::Lt;      // Compare
  ExprPtr lhs, rhs;          // Compare: both sides; Is: rhs only
  std::string is_var;        // Is: bound variable

  static Literal make_call(Atom a);
  static Literal make_compare(CmpOp op, ExprPtr l, ExprPtr r);
  static Literal make_is(std::string var, ExprPtr rhs);
};

struct Clause {
  Atom head;
  std::vector<Literal> body;
};

// name/arity key, e.g. "p/2". The sole identity used across the analysis.
struct PredRef {
  std::string name;
  int arity = 0;
  std::string key() const { return name + "/" + std::to_string(arity); }
  bool operator==(const PredRef& o) const { return name == o.name && arity == o.arity; }
  bool operator<(const PredRef& o) const {
    return name != o.name ? name < o.name : arity < o.arity;
  }
};

struct Directive {
  enum class Kind { Analyze, IntPos, InterArg };
  Kind kind;
  PredRef pred;
  std::vector<int> positions;  // IntPos (1-based)
  std::string condition_text;  // InterArg (verbatim; resolved at load)
  int line = 0;
};

struct Program {
  std::vector<Clause> clauses;
  std::vector<Directive> directives;

  // Clause indices per predicate key, in textual order.
  std::map<std::string, std::vector<size_t>> clauses_of;
  void reindex();

  std::optional<PredRef> analyze_target() const;
};

// Variable names appearing in a term / atom / clause, first-occurrence order.
void collect_term_vars(const TermPtr& t, std::vector<std::string>& out);
std::vector<std::string> clause_vars(const Clause& c);

// Splits an adorned predicate name "base{...}" into base and condition text;
// returns false for plain names.
bool split_adorned_name(const std::string& pred, std::string& base, std::string& cond_text);

}  // namespace numloop
