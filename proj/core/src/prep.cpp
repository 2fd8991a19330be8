#include "numloop/prep.hpp"

#include <algorithm>
#include <functional>

#include "numloop/parse.hpp"

namespace numloop {

// ---------------------------------------------------------------------------
// Integer argument positions

namespace {

struct Occurrence {
  size_t clause_idx;
  const Atom* atom;
};

std::string pred_key_of(const Atom& a) {
  return a.pred + "/" + std::to_string(a.args.size());
}

// Variables appearing in arithmetic literals (either side of a comparison,
// or anywhere in an `is`) of the clause.
std::set<std::string> arith_vars(const Clause& c) {
  std::set<std::string> vars;
  std::vector<std::string> buf;
  for (const auto& lit : c.body) {
    buf.clear();
    switch (lit.kind) {
      case Literal::Kind::Compare:
        collect_vars(*lit.lhs, buf);
        collect_vars(*lit.rhs, buf);
        break;
      case Literal::Kind::Is:
        buf.push_back(lit.is_var);
        collect_vars(*lit.rhs, buf);
        break;
      case Literal::Kind::Call:
        break;
    }
    vars.insert(buf.begin(), buf.end());
  }
  return vars;
}

}  // namespace

PosMap integer_positions(const Program& p) {
  // Every occurrence of every predicate, heads and body calls alike.
  std::map<std::string, std::vector<Occurrence>> occs;
  for (size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    occs[pred_key_of(c.head)].push_back({ci, &c.head});
    for (const auto& lit : c.body)
      if (lit.kind == Literal::Kind::Call)
        occs[pred_key_of(lit.call)].push_back({ci, &lit.call});
  }

  PosMap pm;
  for (const auto& d : p.directives) {
    if (d.kind == Directive::Kind::IntPos) {
      pm[d.pred.key()].insert(d.positions.begin(), d.positions.end());
    } else if (d.kind == Directive::Kind::InterArg) {
      // Positions the declared relation mentions are integer by declaration.
      Cond cond = parse_condition(d.condition_text, d.pred);
      for (const Sym& s : symbols_of(cond))
        if (s.kind == Sym::Kind::Denom) pm[d.pred.key()].insert(s.index);
    }
  }

  // Declared positions must never hold a compound term.
  for (const auto& [key, positions] : pm) {
    auto it = occs.find(key);
    if (it == occs.end()) continue;
    for (int pos : positions)
      for (const Occurrence& o : it->second)
        if (o.atom->args[static_cast<size_t>(pos) - 1]->kind == Term::Kind::Compound)
          throw InputError("compound term at declared integer position $" +
                           std::to_string(pos) + " of " + key);
  }

  // Cache of per-clause arithmetic-literal variables.
  std::map<size_t, std::set<std::string>> arith_cache;
  auto clause_arith = [&](size_t ci) -> const std::set<std::string>& {
    auto [it, fresh] = arith_cache.emplace(ci, std::set<std::string>{});
    if (fresh) it->second = arith_vars(p.clauses[ci]);
    return it->second;
  };

  // Does `var` sit at an already-integer position of some atom in clause ci?
  auto at_integer_position = [&](size_t ci, const std::string& var) {
    const Clause& c = p.clauses[ci];
    auto check = [&](const Atom& a) {
      auto it = pm.find(pred_key_of(a));
      if (it == pm.end()) return false;
      for (int pos : it->second) {
        const TermPtr& t = a.args[static_cast<size_t>(pos) - 1];
        if (t->kind == Term::Kind::Var && t->name == var) return true;
      }
      return false;
    };
    if (check(c.head)) return true;
    for (const auto& lit : c.body)
      if (lit.kind == Literal::Kind::Call && check(lit.call)) return true;
    return false;
  };

  // Least fixpoint: add a position once every occurrence carries an integer
  // constant or a variable with arithmetic / integer-position evidence.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [key, list] : occs) {
      const size_t arity = list.front().atom->args.size();
      for (size_t i = 1; i <= arity; ++i) {
        if (pm[key].count(static_cast<int>(i))) continue;
        bool all_ok = true;
        for (const Occurrence& o : list) {
          const TermPtr& t = o.atom->args[i - 1];
          if (t->kind == Term::Kind::IntConst) continue;
          if (t->kind == Term::Kind::Compound) {
            all_ok = false;
            break;
          }
          if (clause_arith(o.clause_idx).count(t->name)) continue;
          if (at_integer_position(o.clause_idx, t->name)) continue;
          all_ok = false;
          break;
        }
        if (all_ok) {
          pm[key].insert(static_cast<int>(i));
          changed = true;
        }
      }
    }
  }

  // Drop empty entries created by lookups.
  for (auto it = pm.begin(); it != pm.end();)
    it = it->second.empty() ? pm.erase(it) : std::next(it);
  return pm;
}

// ---------------------------------------------------------------------------
// Partial normalisation

Program partially_normalise(const Program& p, const PosMap& pm) {
  Program out = p;
  for (Clause& c : out.clauses) {
    auto it = pm.find(pred_key_of(c.head));
    if (it == pm.end()) continue;

    std::set<std::string> used;
    for (const std::string& v : clause_vars(c)) used.insert(v);
    int fresh_counter = 0;
    auto fresh_var = [&] {
      std::string name;
      do {
        name = "_N" + std::to_string(++fresh_counter);
      } while (used.count(name));
      used.insert(name);
      return name;
    };

    std::vector<Literal> bindings;
    std::set<std::string> seen;  // head variables already used at an integer position
    for (int pos : it->second) {
      TermPtr& arg = c.head.args[static_cast<size_t>(pos) - 1];
      const bool keep =
          arg->kind == Term::Kind::Var && seen.insert(arg->name).second;
      if (keep) continue;
      // Displaced constant or duplicate variable: fresh head variable plus a
      // `V >= t, V =< t` pair up front.
      ExprPtr old = arg->kind == Term::Kind::IntConst ? ArithExpr::integer(arg->value)
                                                      : ArithExpr::var_ref(arg->name);
      std::string v = fresh_var();
      seen.insert(v);
      arg = Term::var(v);
      ExprPtr ve = ArithExpr::var_ref(v);
      bindings.push_back(Literal::make_compare(CmpOp::Ge, ve, old));
      bindings.push_back(Literal::make_compare(CmpOp::Le, ve, old));
    }
    if (!bindings.empty())
      c.body.insert(c.body.begin(), bindings.begin(), bindings.end());
  }
  out.reindex();
  return out;
}

// ---------------------------------------------------------------------------
// Maximal guard prefix

PrefixInfo maximal_prefix(const Clause& c, size_t clause_id, const PosMap& pm) {
  PrefixInfo info;
  info.clause_id = clause_id;

  std::map<std::string, int> head_int_var;  // variable name -> 1-based position
  const std::string key = pred_key_of(c.head);
  if (auto it = pm.find(key); it != pm.end()) {
    for (int pos : it->second) {
      const TermPtr& t = c.head.args[static_cast<size_t>(pos) - 1];
      if (t->kind == Term::Kind::Var) head_int_var.emplace(t->name, pos);
    }
  }

  auto sym_of = [&](const std::string& v) { return Sym::denom(key, head_int_var.at(v)); };

  Conj prefix;
  std::vector<std::string> vars;
  auto probe = [&](const std::string& v) { return Sym::var(v); };
  for (const auto& lit : c.body) {
    if (lit.kind != Literal::Kind::Compare) break;
    // Exactly linear only; `div` has no precise linear form.
    if (!to_linform(*lit.lhs, probe) || !to_linform(*lit.rhs, probe)) break;
    vars.clear();
    collect_vars(*lit.lhs, vars);
    collect_vars(*lit.rhs, vars);
    if (!std::all_of(vars.begin(), vars.end(),
                     [&](const std::string& v) { return head_int_var.count(v); }))
      break;
    prefix.add(normalize(lit.op, *lit.lhs, *lit.rhs, sym_of));
    ++info.prefix_len;
  }
  info.condition = Cond::of(std::move(prefix));
  return info;
}

// ---------------------------------------------------------------------------
// Dependency graph

namespace {

// Iterative Tarjan SCC over string keys.
struct Tarjan {
  const std::map<std::string, std::set<std::string>>& edges;
  std::map<std::string, int> index, low, scc;
  std::vector<std::string> stack;
  std::set<std::string> on_stack;
  int next_index = 0, next_scc = 0;

  // Single shared empty set so begin/end iterators of edge-less nodes always
  // come from the same container.
  const std::set<std::string>& outs(const std::string& node) const {
    static const std::set<std::string> none;
    auto it = edges.find(node);
    return it == edges.end() ? none : it->second;
  }

  void run(const std::string& root) {
    if (index.count(root)) return;
    // Explicit stack of (node, iterator position into its edge set).
    std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> work;
    visit(root, work);
    while (!work.empty()) {
      // `visit` may grow (and reallocate) `work`, so never hold references to
      // its elements across a descent; re-fetch through work.back() instead.
      const std::string node = work.back().first;
      const auto& out = outs(node);
      bool descended = false;
      while (work.back().second != out.end()) {
        const std::string next = *work.back().second++;
        if (!index.count(next)) {
          visit(next, work);
          descended = true;
          break;
        }
        if (on_stack.count(next)) low[node] = std::min(low[node], index[next]);
      }
      if (descended) continue;
      if (low[node] == index[node]) {
        for (;;) {
          std::string top = stack.back();
          stack.pop_back();
          on_stack.erase(top);
          scc[top] = next_scc;
          if (top == node) break;
        }
        ++next_scc;
      }
      std::string finished = node;
      work.pop_back();
      if (!work.empty())
        low[work.back().first] = std::min(low[work.back().first], low[finished]);
    }
  }

  void visit(const std::string& node,
             std::vector<std::pair<std::string, std::set<std::string>::const_iterator>>& work) {
    index[node] = low[node] = next_index++;
    stack.push_back(node);
    on_stack.insert(node);
    work.emplace_back(node, outs(node).begin());
  }
};

}  // namespace

DependencyGraph dependency_graph(const Program& p) {
  DependencyGraph g;
  std::set<std::string> preds;
  for (const Clause& c : p.clauses) {
    const std::string head = pred_key_of(c.head);
    preds.insert(head);
    g.calls[head];  // ensure node exists
    for (const auto& lit : c.body) {
      if (lit.kind != Literal::Kind::Call) continue;
      const std::string callee = pred_key_of(lit.call);
      preds.insert(callee);
      g.calls[head].insert(callee);
    }
  }
  g.preds.assign(preds.begin(), preds.end());

  Tarjan t{g.calls, {}, {}, {}, {}, {}, 0, 0};
  for (const std::string& pred : g.preds) t.run(pred);
  g.scc_of = std::move(t.scc);

  // Recursive: SCC of size >= 2, or a direct self-loop.
  std::map<int, int> scc_size;
  for (const auto& [pred, id] : g.scc_of) scc_size[id]++;
  for (const std::string& pred : g.preds) {
    if (scc_size[g.scc_of.at(pred)] >= 2 ||
        (g.calls.count(pred) && g.calls.at(pred).count(pred)))
      g.recursive.insert(pred);
  }
  return g;
}

bool DependencyGraph::same_class(const std::string& a, const std::string& b) const {
  auto ia = scc_of.find(a), ib = scc_of.find(b);
  return ia != scc_of.end() && ib != scc_of.end() && ia->second == ib->second;
}

bool DependencyGraph::is_recursive(const std::string& pred) const {
  return recursive.count(pred) != 0;
}

bool DependencyGraph::depends_on(const std::string& from, const std::string& to) const {
  return reachable_from(from).count(to) != 0;
}

std::vector<std::string> DependencyGraph::class_of(const std::string& pred) const {
  std::vector<std::string> out;
  auto it = scc_of.find(pred);
  if (it == scc_of.end()) return out;
  for (const std::string& q : preds)
    if (scc_of.at(q) == it->second) out.push_back(q);
  return out;
}

std::set<std::string> DependencyGraph::reachable_from(const std::string& pred) const {
  std::set<std::string> seen{pred};
  std::vector<std::string> frontier{pred};
  while (!frontier.empty()) {
    std::string cur = frontier.back();
    frontier.pop_back();
    auto it = calls.find(cur);
    if (it == calls.end()) continue;
    for (const std::string& next : it->second)
      if (seen.insert(next).second) frontier.push_back(next);
  }
  return seen;
}

}  // namespace numloop
