#include "numloop/oracle.hpp"

#include <algorithm>
#include <set>

#include "numloop/print.hpp"

namespace numloop {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

namespace {

using Env = std::map<std::string, TermPtr>;
using EnvPtr = std::shared_ptr<const Env>;

struct GoalNode;
using GoalPtr = std::shared_ptr<const GoalNode>;
struct GoalNode {
  const Literal* lit;  // borrowed from the program / query storage
  EnvPtr env;
  GoalPtr next;
};

struct Choice {
  GoalPtr goals;  // head is the Call literal being retried
  const std::vector<size_t>* clause_ids;
  size_t next = 0;
  size_t trail_mark = 0;
};

std::string key_of(const Atom& a) { return a.pred + "/" + std::to_string(a.args.size()); }

struct Machine {
  const Program& prog;
  long budget;
  SolveResult result;
  std::set<std::string> diag_seen;

  std::vector<TermPtr> cells;   // runtime variable bindings (nullptr = free)
  std::vector<size_t> trail;    // cells bound since the last mark
  std::vector<std::vector<std::string>> clause_var_names;  // per clause, cached
  std::vector<Choice> stack;

  // Query bookkeeping for answer rendering.
  std::vector<std::string> query_vars;
  EnvPtr query_env;

  Machine(const Program& p, long step_bound) : prog(p), budget(step_bound) {
    clause_var_names.reserve(p.clauses.size());
    for (const Clause& c : p.clauses) clause_var_names.push_back(clause_vars(c));
  }

  // One budget unit; returns false when the budget is exhausted.
  bool step() {
    if (budget <= 0 || --budget < 0) {
      result.hit_bound = true;
      return false;
    }
    return true;
  }

  void diag(const std::string& msg) {
    if (diag_seen.insert(msg).second) result.diagnostics.push_back(msg);
  }

  size_t idx(const TermPtr& t) const { return static_cast<size_t>(t->value); }

  TermPtr fresh_var() {
    cells.push_back(nullptr);
    return std::make_shared<Term>(
        Term{Term::Kind::Var, std::string(), Int(cells.size() - 1), {}});
  }

  TermPtr deref(TermPtr t) const {
    while (t->kind == Term::Kind::Var) {
      const TermPtr& b = cells[idx(t)];
      if (!b) return t;
      t = b;
    }
    return t;
  }

  void bind(size_t cell, TermPtr t) {
    cells[cell] = std::move(t);
    trail.push_back(cell);
  }

  void undo_to(size_t mark) {
    while (trail.size() > mark) {
      cells[trail.back()] = nullptr;
      trail.pop_back();
    }
  }

  bool occurs(size_t cell, const TermPtr& t0) const {
    TermPtr t = deref(t0);
    if (t->kind == Term::Kind::Var) return idx(t) == cell;
    if (t->kind == Term::Kind::Compound)
      for (const auto& a : t->args)
        if (occurs(cell, a)) return true;
    return false;
  }

  bool unify(TermPtr a, TermPtr b) {
    a = deref(std::move(a));
    b = deref(std::move(b));
    if (a->kind == Term::Kind::Var) {
      if (b->kind == Term::Kind::Var && idx(a) == idx(b)) return true;
      if (occurs(idx(a), b)) return false;
      bind(idx(a), std::move(b));
      return true;
    }
    if (b->kind == Term::Kind::Var) {
      if (occurs(idx(b), a)) return false;
      bind(idx(b), std::move(a));
      return true;
    }
    if (a->kind != b->kind) return false;
    if (a->kind == Term::Kind::IntConst) return a->value == b->value;
    if (a->name != b->name || a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!unify(a->args[i], b->args[i])) return false;
    return true;
  }

  // Pattern term from the program text, variables resolved through env.
  TermPtr instantiate(const TermPtr& t, const Env& env) {
    switch (t->kind) {
      case Term::Kind::Var:
        return env.at(t->name);
      case Term::Kind::IntConst:
        return t;
      case Term::Kind::Compound: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) args.push_back(instantiate(a, env));
        return Term::compound(t->name, std::move(args));
      }
    }
    return t;
  }

  std::optional<Int> eval_expr(const ArithExpr& e, const Env& env) {
    switch (e.kind) {
      case ArithExpr::Kind::Var: {
        auto it = env.find(e.var);
        TermPtr t = it == env.end() ? nullptr : deref(it->second);
        if (t && t->kind == Term::Kind::IntConst) return t->value;
        diag(!t || t->kind == Term::Kind::Var
                 ? "arithmetic on an unbound variable: " + e.var
                 : "arithmetic on a non-integer term: " + e.var);
        return std::nullopt;
      }
      case ArithExpr::Kind::IntConst:
        return e.value;
      case ArithExpr::Kind::Neg: {
        auto v = eval_expr(*e.lhs, env);
        if (!v) return std::nullopt;
        return -*v;
      }
      default: {
        auto l = eval_expr(*e.lhs, env);
        auto r = eval_expr(*e.rhs, env);
        if (!l || !r) return std::nullopt;
        switch (e.kind) {
          case ArithExpr::Kind::Add:
            return *l + *r;
          case ArithExpr::Kind::Sub:
            return *l - *r;
          case ArithExpr::Kind::Mul:
            return *l * *r;
          case ArithExpr::Kind::Div:
            if (*r == 0) {
              diag("division by zero");
              return std::nullopt;
            }
            return floor_div(*l, *r);
          default:
            return std::nullopt;
        }
      }
    }
  }

  bool eval_builtin(const Literal& lit, const Env& env) {
    if (lit.kind == Literal::Kind::Compare) {
      auto l = eval_expr(*lit.lhs, env);
      auto r = eval_expr(*lit.rhs, env);
      if (!l || !r) return false;
      switch (lit.op) {
        case CmpOp::Lt:
          return *l < *r;
        case CmpOp::Gt:
          return *l > *r;
        case CmpOp::Le:
          return *l <= *r;
        case CmpOp::Ge:
          return *l >= *r;
      }
      return false;
    }
    // IsBinding: evaluate, then unify with the target.
    auto v = eval_expr(*lit.rhs, env);
    if (!v) return false;
    return unify(env.at(lit.is_var), Term::integer(*v));
  }

  // Canonical answer rendering: free variables are renamed _A, _B, ... in
  // order of appearance within the answer.
  std::string render_runtime(const TermPtr& t0, std::map<size_t, std::string>& names) {
    TermPtr t = deref(t0);
    switch (t->kind) {
      case Term::Kind::Var: {
        auto [it, fresh] = names.emplace(idx(t), std::string());
        if (fresh) {
          size_t n = names.size() - 1;
          it->second = n < 26 ? std::string("_") + static_cast<char>('A' + n)
                              : "_V" + std::to_string(n);
        }
        return it->second;
      }
      case Term::Kind::IntConst:
        return t->value.str();
      case Term::Kind::Compound: {
        std::string out = t->name;
        if (!t->args.empty()) {
          out += "(";
          for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) out += ", ";
            out += render_runtime(t->args[i], names);
          }
          out += ")";
        }
        return out;
      }
    }
    return {};
  }

  void record_answer() {
    if (query_vars.empty()) {
      result.answers.push_back("yes");
      return;
    }
    std::map<size_t, std::string> names;
    std::string out;
    for (size_t i = 0; i < query_vars.size(); ++i) {
      if (i) out += ", ";
      out += query_vars[i] + " = " + render_runtime(query_env->at(query_vars[i]), names);
    }
    result.answers.push_back(std::move(out));
  }

  // Tries the remaining candidates of the top choicepoint. True: a body was
  // pushed and `cur` updated (frame kept for retry). False: exhausted (frame
  // popped) or budget hit (frame kept, caller unwinds).
  bool advance_top(GoalPtr& cur) {
    Choice& ch = stack.back();
    const Atom& call = ch.goals->lit->call;
    while (ch.next < ch.clause_ids->size()) {
      undo_to(ch.trail_mark);
      const size_t ci = (*ch.clause_ids)[ch.next++];
      const Clause& cl = prog.clauses[ci];

      auto env = std::make_shared<Env>();
      for (const std::string& v : clause_var_names[ci]) env->emplace(v, fresh_var());

      bool ok = true;
      for (size_t i = 0; ok && i < call.args.size(); ++i)
        ok = unify(instantiate(call.args[i], *ch.goals->env),
                   instantiate(cl.head.args[i], *env));
      if (!ok) continue;
      if (!step()) return false;  // budget spent on the successful unification

      GoalPtr rest = ch.goals->next;
      for (auto it = cl.body.rbegin(); it != cl.body.rend(); ++it)
        rest = std::make_shared<GoalNode>(GoalNode{&*it, env, rest});
      cur = rest;
      return true;
    }
    undo_to(ch.trail_mark);
    stack.pop_back();
    return false;
  }

  bool backtrack(GoalPtr& cur) {
    while (!stack.empty()) {
      if (result.hit_bound) return false;
      if (advance_top(cur)) return true;
    }
    return false;
  }

  SolveResult run(const std::vector<Atom>& query) {
    // Rename the query into runtime terms via a shared environment.
    std::vector<std::string> vars;
    for (const Atom& a : query)
      for (const auto& t : a.args) collect_term_vars(t, vars);
    auto env = std::make_shared<Env>();
    for (const std::string& v : vars) env->emplace(v, fresh_var());
    query_vars = std::move(vars);
    query_env = env;

    // Wrap the query atoms as Call literals; storage must outlive the run.
    std::vector<Literal> lits;
    lits.reserve(query.size());
    for (const Atom& a : query) lits.push_back(Literal::make_call(a));
    GoalPtr goals;
    for (auto it = lits.rbegin(); it != lits.rend(); ++it)
      goals = std::make_shared<GoalNode>(GoalNode{&*it, env, goals});

    static const std::vector<size_t> no_clauses;
    GoalPtr cur = goals;
    for (;;) {
      if (result.hit_bound) break;
      if (!cur) {
        record_answer();
        if (!backtrack(cur)) break;
        continue;
      }
      const Literal& lit = *cur->lit;
      if (lit.kind != Literal::Kind::Call) {
        if (!step()) break;  // builtin evaluation
        if (eval_builtin(lit, *cur->env)) {
          cur = cur->next;
          continue;
        }
        if (!backtrack(cur)) break;
        continue;
      }
      auto it = prog.clauses_of.find(key_of(lit.call));
      const std::vector<size_t>* ids = it == prog.clauses_of.end() ? &no_clauses : &it->second;
      stack.push_back(Choice{cur, ids, 0, trail.size()});
      if (!advance_top(cur)) {
        if (!backtrack(cur)) break;
      }
    }
    std::sort(result.answers.begin(), result.answers.end());
    return std::move(result);
  }
};

}  // namespace

SolveResult ld_solve(const Program& p, const std::vector<Atom>& query, long step_bound) {
  Machine m(p, step_bound);
  return m.run(query);
}

ComparisonReport compare_semantics(const Program& p, const Program& pag,
                                   const std::vector<std::vector<Atom>>& queries,
                                   long bound) {
  ComparisonReport rep;
  for (const auto& q : queries) {
    ++rep.queries;
    SolveResult a = ld_solve(p, q, bound);
    SolveResult b = ld_solve(pag, q, bound);
    std::string text;
    for (size_t i = 0; i < q.size(); ++i) {
      if (i) text += ", ";
      text += render_atom(q[i]);
    }
    if (a.hit_bound != b.hit_bound) {
      rep.mismatches.push_back(text + ": bound status differs (original " +
                               (a.hit_bound ? "hit" : "finished") + ", transformed " +
                               (b.hit_bound ? "hit" : "finished") + ")");
    } else if (!a.hit_bound && a.answers != b.answers) {
      rep.mismatches.push_back(text + ": answer multisets differ (" +
                               std::to_string(a.answers.size()) + " vs " +
                               std::to_string(b.answers.size()) + ")");
    }
  }
  return rep;
}

ValidationReport validate_condition(const Program& p, const PredRef& query,
                                    const Cond& condition, Int lo, Int hi, long bound) {
  ValidationReport rep;
  if (lo > hi || query.arity <= 0) return rep;
  const int k = query.arity;
  std::vector<Int> tuple(static_cast<size_t>(k), lo);
  for (;;) {
    std::map<Sym, Int> point;
    for (int i = 0; i < k; ++i)
      point.emplace(Sym::denom(query.key(), i + 1), tuple[static_cast<size_t>(i)]);
    if (holds_at(condition, point)) {
      Atom a{query.name, {}};
      for (const Int& v : tuple) a.args.push_back(Term::integer(v));
      ++rep.checked;
      if (ld_solve(p, {a}, bound).hit_bound) rep.violations.push_back(render_atom(a));
    } else {
      ++rep.skipped;
    }
    int i = k - 1;
    for (; i >= 0; --i) {
      if (tuple[static_cast<size_t>(i)] < hi) {
        tuple[static_cast<size_t>(i)] += 1;
        break;
      }
      tuple[static_cast<size_t>(i)] = lo;
    }
    if (i < 0) break;
  }
  return rep;
}

}  // namespace numloop
