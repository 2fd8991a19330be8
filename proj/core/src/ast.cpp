#include "numloop/ast.hpp"

#include <algorithm>

namespace numloop {

TermPtr Term::var(std::string n) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->name = std::move(n);
  return t;
}

TermPtr Term::integer(Int v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::IntConst;
  t->value = std::move(v);
  return t;
}

TermPtr Term::compound(std::string functor, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Compound;
  t->name = std::move(functor);
  t->args = std::move(args);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Var: return a.name == b.name;
    case Term::Kind::IntConst: return a.value == b.value;
    case Term::Kind::Compound:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (!(*a.args[i] == *b.args[i])) return false;
      return true;
  }
  return false;
}

ExprPtr ArithExpr::var_ref(std::string n) {
  auto e = std::make_shared<ArithExpr>();
  e->kind = Kind::Var;
  e->var = std::move(n);
  return e;
}

ExprPtr ArithExpr::integer(Int v) {
  auto e = std::make_shared<ArithExpr>();
  e->kind = Kind::IntConst;
  e->value = std::move(v);
  return e;
}

ExprPtr ArithExpr::binary(Kind k, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<ArithExpr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr ArithExpr::negate(ExprPtr inner) {
  auto e = std::make_shared<ArithExpr>();
  e->kind = Kind::Neg;
  e->lhs = std::move(inner);
  return e;
}

bool operator==(const ArithExpr& a, const ArithExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ArithExpr::Kind::Var: return a.var == b.var;
    case ArithExpr::Kind::IntConst: return a.value == b.value;
    case ArithExpr::Kind::Neg: return *a.lhs == *b.lhs;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

static bool has_var(const ArithExpr& e) {
  switch (e.kind) {
    case ArithExpr::Kind::Var: return true;
    case ArithExpr::Kind::IntConst: return false;
    case ArithExpr::Kind::Neg: return has_var(*e.lhs);
    default: return has_var(*e.lhs) || has_var(*e.rhs);
  }
}

bool is_linear(const ArithExpr& e) {
  switch (e.kind) {
    case ArithExpr::Kind::Var:
    case ArithExpr::Kind::IntConst:
      return true;
    case ArithExpr::Kind::Neg:
      return is_linear(*e.lhs);
    case ArithExpr::Kind::Mul:
      if (has_var(*e.lhs) && has_var(*e.rhs)) return false;
      return is_linear(*e.lhs) && is_linear(*e.rhs);
    case ArithExpr::Kind::Div:
      if (has_var(*e.rhs)) return false;
      return is_linear(*e.lhs) && is_linear(*e.rhs);
    default:
      return is_linear(*e.lhs) && is_linear(*e.rhs);
  }
}

void collect_vars(const ArithExpr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case ArithExpr::Kind::Var:
      if (std::find(out.begin(), out.end(), e.var) == out.end()) out.push_back(e.var);
      return;
    case ArithExpr::Kind::IntConst:
      return;
    case ArithExpr::Kind::Neg:
      collect_vars(*e.lhs, out);
      return;
    default:
      collect_vars(*e.lhs, out);
      collect_vars(*e.rhs, out);
  }
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "=<";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

Literal Literal::make_call(Atom a) {
  Literal l;
  l.kind = Kind::Call;
  l.call = std::move(a);
  return l;
}

Literal Literal::make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  Literal l;
  l.kind = Kind::Compare;
  l.op = op;
  l.lhs = std::move(lhs);
  l.rhs = std::move(rhs);
  return l;
}

Literal Literal::make_is(std::string var, ExprPtr rhs) {
  Literal l;
  l.kind = Kind::Is;
  l.is_var = std::move(var);
  l.rhs = std::move(rhs);
  return l;
}

void Program::reindex() {
  clauses_of.clear();
  for (size_t i = 0; i < clauses.size(); ++i) {
    PredRef pr{clauses[i].head.pred, static_cast<int>(clauses[i].head.args.size())};
    clauses_of[pr.key()].push_back(i);
  }
}

std::optional<PredRef> Program::analyze_target() const {
  for (const auto& d : directives)
    if (d.kind == Directive::Kind::Analyze) return d.pred;
  return std::nullopt;
}

void collect_term_vars(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
      return;
    case Term::Kind::IntConst:
      return;
    case Term::Kind::Compound:
      for (const auto& a : t->args) collect_term_vars(a, out);
  }
}

std::vector<std::string> clause_vars(const Clause& c) {
  std::vector<std::string> out;
  for (const auto& a : c.head.args) collect_term_vars(a, out);
  for (const auto& lit : c.body) {
    switch (lit.kind) {
      case Literal::Kind::Call:
        for (const auto& a : lit.call.args) collect_term_vars(a, out);
        break;
      case Literal::Kind::Compare:
        collect_vars(*lit.lhs, out);
        collect_vars(*lit.rhs, out);
        break;
      case Literal::Kind::Is:
        if (std::find(out.begin(), out.end(), lit.is_var) == out.end())
          out.push_back(lit.is_var);
        collect_vars(*lit.rhs, out);
        break;
    }
  }
  return out;
}

bool split_adorned_name(const std::string& pred, std::string& base, std::string& cond_text) {
  auto brace = pred.find('{');
  if (brace == std::string::npos || pred.back() != '}') return false;
  base = pred.substr(0, brace);
  cond_text = pred.substr(brace + 1, pred.size() - brace - 2);
  return true;
}

}  // namespace numloop
