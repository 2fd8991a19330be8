// Exact linear-integer constraint engine: canonical inequalities, DNF
// conditions, negation, Fourier-Motzkin satisfiability and projection,
// entailment, simplification, and instantiation onto call arguments.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "numloop/ast.hpp"

namespace numloop {

// A constraint symbol: either the i-th argument slot of a predicate (written
// $i in that predicate's scope) or a named clause variable.
struct Sym {
  enum class Kind { Denom, Var };
  Kind kind = Kind::Var;
  std::string text;  // predicate key for Denom, variable name for Var
  int index = 0;     // 1-based argument position for Denom

  static Sym denom(std::string pred_key, int i) {
    return Sym{Kind::Denom, std::move(pred_key), i};
  }
  static Sym var(std::string name) { return Sym{Kind::Var, std::move(name), 0}; }

  auto operator<=>(const Sym&) const = default;
};

// A linear form sum(coeff * sym) + constant with exact integer coefficients.
struct LinForm {
  std::map<Sym, Int> coeff;
  Int constant = 0;

  void add_term(const Sym& s, const Int& c);
  LinForm& operator+=(const LinForm& o);
  LinForm& operator-=(const LinForm& o);
  LinForm operator-() const;
  void scale(const Int& k);
  bool is_zero() const { return coeff.empty() && constant == 0; }
  bool is_constant() const { return coeff.empty(); }
  bool operator==(const LinForm&) const = default;
};

// Converts an arithmetic expression into a linear form, mapping variable
// names through `sym_of`. Returns nullopt for expressions the engine cannot
// represent exactly: products of two variable-containing subtrees and any
// integer division.
std::optional<LinForm> to_linform(const ArithExpr& e,
                                  const std::function<Sym(const std::string&)>& sym_of);

// One inequality form >= 0, kept canonical: no zero coefficients and the gcd
// of all coefficients together with the constant is 1. Strict comparisons are
// normalized away using integrality (a > b becomes a - b - 1 >= 0).
struct LinIneq {
  LinForm form;

  static LinIneq of(LinForm f);
  bool trivially_true() const { return form.coeff.empty() && form.constant >= 0; }
  bool trivially_false() const { return form.coeff.empty() && form.constant < 0; }
  bool operator==(const LinIneq&) const = default;
  // Lexicographic on (coeff map, constant); hand-written because the
  // multiprecision integers provide no three-way comparison.
  bool operator<(const LinIneq& o) const;
};

// Builds the canonical inequality for `lhs op rhs`. Throws InputError when a
// side is not linear (the message names the offending operation).
LinIneq normalize(CmpOp op, const ArithExpr& lhs, const ArithExpr& rhs,
                  const std::function<Sym(const std::string&)>& sym_of);

// A conjunction of inequalities. Empty means true. Canonical: sorted, no
// duplicates, no trivially-true rows; a trivially-false row makes the whole
// conjunction the canonical false {-1 >= 0}.
struct Conj {
  std::vector<LinIneq> rows;

  static Conj top() { return Conj{}; }
  static Conj falsum();
  void add(LinIneq q);
  void add_all(const Conj& o);
  bool is_top() const { return rows.empty(); }
  bool is_falsum() const;
  bool operator==(const Conj&) const = default;
};

// Disjunctive normal form over conjunctions. No disjuncts means false; the
// single empty conjunction means true.
struct Cond {
  std::vector<Conj> disjuncts;

  static Cond top() { return Cond{{Conj::top()}}; }
  static Cond bottom() { return Cond{}; }
  static Cond of(Conj c) { return Cond{{std::move(c)}}; }
  bool is_bottom() const { return disjuncts.empty(); }
  bool is_top() const;
  bool single_conj() const { return disjuncts.size() == 1; }
  bool operator==(const Cond&) const = default;
};

// Connectives. conj_cond expands the product of the two DNFs; disj_cond
// concatenates and dedups. Neither simplifies beyond dropping duplicates.
Cond conj_cond(const Cond& a, const Cond& b);
Cond disj_cond(const Cond& a, const Cond& b);

// Exact logical negation into DNF; exact over the integers because every
// stored inequality is non-strict (!(e >= 0) is -e - 1 >= 0).
Cond negate(const Cond& c);

// Fourier-Motzkin satisfiability over the rationals. "false" is sound for
// the integers; "true" is the conservative answer (rational relaxation).
bool satisfiable(const Conj& c);
bool satisfiable(const Cond& c);

// yes iff every disjunct of a /\ not(b) is unsatisfiable.
bool entails(const Cond& a, const Cond& b);
bool equivalent(const Cond& a, const Cond& b);

// Fourier-Motzkin projection: eliminates the given symbols. The result is
// entailed by `c` and mentions none of them. Throws CapacityError when the
// intermediate system exceeds the row cap.
Conj eliminate(const Conj& c, const std::vector<Sym>& syms);

// Keeps only the symbols in `keep`, eliminating everything else.
Conj project_onto(const Conj& c, const std::vector<Sym>& keep);

// Substitutes each symbol by a linear form (identity for unmapped symbols).
Conj substitute(const Conj& c, const std::map<Sym, LinForm>& map);
Cond substitute(const Cond& c, const std::map<Sym, LinForm>& map);

// Replaces predicate denominators by the atom's arguments (variables or
// integer constants). Throws InputError on a compound argument at a mapped
// position.
Cond instantiate(const Cond& c, const Atom& atom);

// Partition check: pairwise conjunctions unsatisfiable and the negation of
// the disjunction unsatisfiable.
bool is_partition(const std::vector<Cond>& conds);

// Removes unsatisfiable disjuncts, redundant rows inside each disjunct,
// disjuncts absorbed by other disjuncts; detects tautologies (rendering the
// result as the canonical true) and orders disjuncts canonically. By default
// it also merges integer regions that are adjacent through an integer-free
// rational gap ($1 =< -5 \/ $1 >= -4 becomes true); pass false where the
// rational shape must be preserved exactly, e.g. for adornment cells whose
// pairwise disjointness is checked over the rational relaxation.
Cond simplify(const Cond& c, bool merge_integer_regions = true);

// All symbols mentioned by the condition.
std::vector<Sym> symbols_of(const Cond& c);
std::vector<Sym> symbols_of(const Conj& c);

// Evaluates the condition at a concrete integer point (symbols missing from
// the point are an error); used by brute-force property checks and sweeps.
bool holds_at(const Conj& c, const std::map<Sym, Int>& point);
bool holds_at(const Cond& c, const std::map<Sym, Int>& point);

}  // namespace numloop
