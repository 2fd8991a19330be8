// Canonical renderer for programs, terms, and symbolic conditions. The
// output re-parses to a structurally equal value, and equal conditions
// render identically.
#pragma once

#include <string>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"

namespace numloop {

struct RenderOpts {
  // Renders `x >= c+1` as `x > c` (and the =< counterpart) for human eyes.
  // Off by default so tests and adorned names stay in canonical form.
  bool pretty_strict = false;
};

std::string render_term(const TermPtr& t);
std::string render_expr(const ArithExpr& e);
std::string render_atom(const Atom& a);
std::string render_literal(const Literal& l);
std::string render_clause(const Clause& c);
std::string render_program(const Program& p);

// Conditions print in DNF with ` /\ ` and ` \/ ` (conjunction binds
// tighter); each inequality puts its positive terms on the left.
std::string render_ineq(const LinIneq& q, const RenderOpts& opts = {});
std::string render_conj(const Conj& c, const RenderOpts& opts = {});
std::string render_cond(const Cond& c, const RenderOpts& opts = {});

// Name of an adorned predicate: base name plus braced canonical condition,
// e.g. `q{$1 >= $2 + 1}`; re-parseable as an identifier.
std::string adorned_name(const std::string& base, const Cond& adornment);

}  // namespace numloop
