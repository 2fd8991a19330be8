#include "numloop/print.hpp"

#include <sstream>

namespace numloop {

// ---------------------------------------------------------------------------
// Terms, expressions, clauses

std::string render_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::IntConst:
      return t->value.str();
    case Term::Kind::Compound: {
      std::string out = t->name;
      if (!t->args.empty()) {
        out += "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) out += ", ";
          out += render_term(t->args[i]);
        }
        out += ")";
      }
      return out;
    }
  }
  return {};
}

namespace {

int prec_of(ArithExpr::Kind k) {
  switch (k) {
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub:
      return 1;
    case ArithExpr::Kind::Mul:
    case ArithExpr::Kind::Div:
      return 2;
    case ArithExpr::Kind::Neg:
      return 3;
    case ArithExpr::Kind::Var:
    case ArithExpr::Kind::IntConst:
      return 4;
  }
  return 4;
}

std::string render_expr_prec(const ArithExpr& e, int min_prec) {
  int p = prec_of(e.kind);
  std::string out;
  switch (e.kind) {
    case ArithExpr::Kind::Var:
      out = e.var;
      break;
    case ArithExpr::Kind::IntConst:
      out = e.value.str();
      if (e.value < 0) out = "(" + out + ")";
      return out;  // parenthesized negatives never need more wrapping
    case ArithExpr::Kind::Neg:
      out = "-" + render_expr_prec(*e.lhs, p);
      break;
    case ArithExpr::Kind::Add:
      out = render_expr_prec(*e.lhs, p) + " + " + render_expr_prec(*e.rhs, p + 1);
      break;
    case ArithExpr::Kind::Sub:
      out = render_expr_prec(*e.lhs, p) + " - " + render_expr_prec(*e.rhs, p + 1);
      break;
    case ArithExpr::Kind::Mul:
      out = render_expr_prec(*e.lhs, p) + " * " + render_expr_prec(*e.rhs, p + 1);
      break;
    case ArithExpr::Kind::Div:
      out = render_expr_prec(*e.lhs, p) + " div " + render_expr_prec(*e.rhs, p + 1);
      break;
  }
  if (p < min_prec) out = "(" + out + ")";
  return out;
}

}  // namespace

std::string render_expr(const ArithExpr& e) { return render_expr_prec(e, 0); }

std::string render_atom(const Atom& a) {
  std::string out = a.pred;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += render_term(a.args[i]);
    }
    out += ")";
  }
  return out;
}

std::string render_literal(const Literal& l) {
  switch (l.kind) {
    case Literal::Kind::Call:
      return render_atom(l.call);
    case Literal::Kind::Compare:
      return render_expr(*l.lhs) + " " + cmp_op_text(l.op) + " " + render_expr(*l.rhs);
    case Literal::Kind::Is:
      return l.is_var + " is " + render_expr(*l.rhs);
  }
  return {};
}

std::string render_clause(const Clause& c) {
  std::string out = render_atom(c.head);
  if (!c.body.empty()) {
    out += " :- ";
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += ", ";
      out += render_literal(c.body[i]);
    }
  }
  return out + ".";
}

std::string render_program(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += render_clause(c);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditions

namespace {

std::string render_sym(const Sym& s) {
  if (s.kind == Sym::Kind::Denom) return "$" + std::to_string(s.index);
  return s.text;
}

std::string render_side(const std::vector<std::pair<Sym, Int>>& terms) {
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    if (terms[i].second != 1) out += terms[i].second.str() + "*";
    out += render_sym(terms[i].first);
  }
  return out;
}

}  // namespace

std::string render_ineq(const LinIneq& q, const RenderOpts& opts) {
  std::vector<std::pair<Sym, Int>> pos, neg;
  for (const auto& [s, k] : q.form.coeff) {
    if (k > 0)
      pos.emplace_back(s, k);
    else
      neg.emplace_back(s, -k);
  }
  const Int& c = q.form.constant;
  if (pos.empty() && neg.empty()) return "0 >= " + Int(-c).str();
  if (pos.empty()) {
    // The =< counterpart of the strict rewrite: a negative bound reads
    // better as a strict comparison against the next integer up.
    if (opts.pretty_strict && c < 0)
      return render_side(neg) + " < " + Int(c + 1).str();
    return render_side(neg) + " =< " + c.str();
  }

  // Positive terms on the left; the constant joins whichever side keeps it
  // nonnegative, so renders read like the source guards.
  Int lhs_const = (!neg.empty() && c > 0) ? c : Int(0);
  Int rhs_const = neg.empty() ? -c : (c < 0 ? -c : Int(0));
  bool strict = false;
  if (opts.pretty_strict && lhs_const == 0 && rhs_const >= 1) {
    strict = true;
    rhs_const -= 1;
  }
  std::string out = render_side(pos);
  if (lhs_const > 0) out += " + " + lhs_const.str();
  out += strict ? " > " : " >= ";
  if (neg.empty()) {
    out += rhs_const.str();
  } else {
    out += render_side(neg);
    if (rhs_const > 0) out += " + " + rhs_const.str();
  }
  return out;
}

std::string render_conj(const Conj& c, const RenderOpts& opts) {
  if (c.is_top()) return "true";
  if (c.is_falsum()) return "false";
  std::string out;
  for (size_t i = 0; i < c.rows.size(); ++i) {
    if (i) out += " /\\ ";
    out += render_ineq(c.rows[i], opts);
  }
  return out;
}

std::string render_cond(const Cond& c, const RenderOpts& opts) {
  if (c.is_bottom()) return "false";
  std::string out;
  for (size_t i = 0; i < c.disjuncts.size(); ++i) {
    if (i) out += " \\/ ";
    out += render_conj(c.disjuncts[i], opts);
  }
  return out;
}

std::string adorned_name(const std::string& base, const Cond& adornment) {
  return base + "{" + render_cond(adornment) + "}";
}

}  // namespace numloop
