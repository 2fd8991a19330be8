#include "numloop/adorn.hpp"

#include <algorithm>

#include "numloop/print.hpp"

namespace numloop {

namespace {

std::string key_of(const Atom& a) { return a.pred + "/" + std::to_string(a.args.size()); }

std::string base_name_of(const std::string& key) {
  return key.substr(0, key.rfind('/'));
}

int arity_of(const std::string& key) {
  return std::stoi(key.substr(key.rfind('/') + 1));
}

// Head integer-position variable names -> 1-based positions.
std::map<std::string, int> head_int_vars(const Atom& head, const PosMap& pm) {
  std::map<std::string, int> out;
  auto it = pm.find(key_of(head));
  if (it == pm.end()) return out;
  for (int pos : it->second) {
    const TermPtr& t = head.args[static_cast<size_t>(pos) - 1];
    if (t->kind == Term::Kind::Var) out.emplace(t->name, pos);
  }
  return out;
}

// Guard prefix of the clause as constraints over its variables.
Conj prefix_rows(const Clause& c, const PosMap& pm) {
  Conj rows;
  const size_t len = maximal_prefix(c, 0, pm).prefix_len;
  for (size_t i = 0; i < len; ++i) rows.add_all(builtin_relation(c.body[i]));
  return rows;
}

// Equality rows of linear `is` literals whose target variable is fresh
// (no earlier occurrence), up to but excluding body position `until`.
Conj fresh_is_rows(const Clause& c, size_t until) {
  Conj rows;
  std::vector<std::string> seen;
  for (const auto& a : c.head.args) collect_term_vars(a, seen);
  for (size_t i = 0; i < until && i < c.body.size(); ++i) {
    const Literal& lit = c.body[i];
    std::vector<std::string> here;
    switch (lit.kind) {
      case Literal::Kind::Is: {
        const bool fresh =
            std::find(seen.begin(), seen.end(), lit.is_var) == seen.end();
        if (fresh) rows.add_all(builtin_relation(lit));
        here.push_back(lit.is_var);
        collect_vars(*lit.rhs, here);
        break;
      }
      case Literal::Kind::Compare:
        collect_vars(*lit.lhs, here);
        collect_vars(*lit.rhs, here);
        break;
      case Literal::Kind::Call:
        for (const auto& t : lit.call.args) collect_term_vars(t, here);
        break;
    }
    for (const auto& v : here)
      if (std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Guards

std::vector<Cond> collect_guards(const Program& p, const std::string& pred_key,
                                 const PosMap& pm) {
  std::vector<Cond> out;
  auto it = p.clauses_of.find(pred_key);
  if (it == p.clauses_of.end()) return out;
  for (size_t ci : it->second) {
    Cond cond = maximal_prefix(p.clauses[ci], ci, pm).condition;
    if (cond.is_top() || !satisfiable(cond)) continue;
    cond = simplify(cond);
    if (std::find(out.begin(), out.end(), cond) == out.end()) out.push_back(cond);
  }
  std::sort(out.begin(), out.end(),
            [](const Cond& a, const Cond& b) { return render_cond(a) < render_cond(b); });
  return out;
}

std::vector<Cond> guard_tuned_set(const std::vector<Cond>& conds) {
  if (conds.size() > 16)
    throw CapacityError("guard set too wide: " + std::to_string(conds.size()) +
                        " conditions (limit 16)");
  std::vector<Cond> negs;
  negs.reserve(conds.size());
  for (const auto& c : conds) negs.push_back(negate(c));

  std::vector<Cond> out;
  const size_t combos = size_t(1) << conds.size();
  for (size_t bits = 0; bits < combos; ++bits) {
    Cond combo = Cond::top();
    for (size_t i = 0; i < conds.size(); ++i) {
      combo = conj_cond(combo, (bits >> i) & 1 ? conds[i] : negs[i]);
      if (combo.is_bottom()) break;
    }
    // Cells keep their exact rational shape so they stay pairwise disjoint
    // under the rational satisfiability checks.
    combo = simplify(combo, /*merge_integer_regions=*/false);
    if (combo.is_bottom()) continue;
    if (std::find(out.begin(), out.end(), combo) == out.end())
      out.push_back(std::move(combo));
  }
  std::sort(out.begin(), out.end(),
            [](const Cond& a, const Cond& b) { return render_cond(a) < render_cond(b); });
  return out;
}

bool is_guard_tuned(const std::vector<Cond>& adornments, const Program& p,
                    const std::string& pred_key, const PosMap& pm) {
  auto it = p.clauses_of.find(pred_key);
  if (it == p.clauses_of.end()) return true;
  for (size_t ci : it->second) {
    Cond guard = maximal_prefix(p.clauses[ci], ci, pm).condition;
    for (const Cond& a : adornments) {
      if (!satisfiable(conj_cond(a, guard))) continue;  // contradicts
      if (!entails(a, guard)) return false;             // neither entails
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Condition extension

namespace {

std::set<int> mentioned_positions(const Cond& c, const std::string& pred_key) {
  std::set<int> out;
  for (const Sym& s : symbols_of(c))
    if (s.kind == Sym::Kind::Denom && s.text == pred_key) out.insert(s.index);
  return out;
}

// Weakest precondition on the head of `c` for its body call at `j` to be made
// under `cq`: the call condition instantiated, conjoined with the guard
// prefix, the fresh is-equalities and declared call relations before `j`,
// then projected onto the head's integer variables and renamed to
// denominators.
Cond weakest_precondition(const Clause& c, size_t j, const Cond& cq, const PosMap& pm,
                          const InterArgRegistry& reg) {
  const std::string hkey = key_of(c.head);
  const Literal& call = c.body[j];

  Cond ctx = instantiate(cq, call.call);
  ctx = conj_cond(ctx, Cond::of(prefix_rows(c, pm)));
  ctx = conj_cond(ctx, Cond::of(fresh_is_rows(c, j)));
  for (size_t i = 0; i < j; ++i) {
    const Literal& lit = c.body[i];
    if (lit.kind != Literal::Kind::Call) continue;
    const std::string ck = key_of(lit.call);
    if (reg.has(ck)) ctx = conj_cond(ctx, instantiate(reg.relation_for(ck), lit.call));
  }
  if (ctx.is_bottom()) return Cond::bottom();

  const std::map<std::string, int> hvars = head_int_vars(c.head, pm);
  std::map<Sym, LinForm> rename;
  std::vector<Sym> keep;
  for (const auto& [name, pos] : hvars) {
    Sym v = Sym::var(name);
    keep.push_back(v);
    LinForm f;
    f.add_term(Sym::denom(hkey, pos), 1);
    rename.emplace(v, std::move(f));
  }

  Cond wp = Cond::bottom();
  for (const Conj& d : ctx.disjuncts) {
    Conj onto = project_onto(d, keep);
    if (onto.is_falsum()) continue;
    wp = disj_cond(wp, Cond::of(substitute(onto, rename)));
  }
  return simplify(wp);
}

}  // namespace

std::map<std::string, std::vector<Cond>> extend_adornments(
    const std::map<std::string, std::vector<Cond>>& pools, const Program& p,
    const PosMap& pm, const DependencyGraph& dg, const InterArgRegistry& reg,
    const std::vector<std::string>& cls) {
  (void)dg;
  std::map<std::string, std::vector<Cond>> out = pools;
  const std::set<std::string> in_class(cls.begin(), cls.end());

  for (bool changed = true; changed;) {
    changed = false;
    for (const Clause& c : p.clauses) {
      const std::string hkey = key_of(c.head);
      if (!in_class.count(hkey)) continue;
      for (size_t j = 0; j < c.body.size(); ++j) {
        const Literal& lit = c.body[j];
        if (lit.kind != Literal::Kind::Call) continue;
        const std::string ck = key_of(lit.call);
        if (!in_class.count(ck)) continue;
        auto pool_it = out.find(ck);
        if (pool_it == out.end()) continue;
        // Snapshot: conditions added during this sweep join the next one.
        const std::vector<Cond> snapshot = pool_it->second;
        for (const Cond& cq : snapshot) {
          Cond wp = weakest_precondition(c, j, cq, pm, reg);
          if (wp.is_top() || !satisfiable(wp)) continue;
          std::vector<Cond>& pool = out[hkey];
          if (std::find(pool.begin(), pool.end(), wp) != pool.end()) continue;
          std::set<int> covered;
          for (const Cond& existing : pool) {
            auto m = mentioned_positions(existing, hkey);
            covered.insert(m.begin(), m.end());
          }
          const std::set<int> fresh = mentioned_positions(wp, hkey);
          if (std::all_of(fresh.begin(), fresh.end(),
                          [&](int pos) { return covered.count(pos) != 0; }))
            continue;
          pool.push_back(std::move(wp));
          changed = true;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The transformation

namespace {

// Exact complement of a conjunction as pairwise-disjoint disjuncts:
// not(r1 /\ r2 /\ ...) = not r1 \/ (r1 /\ not r2) \/ ... Used where disjuncts
// become alternative clauses, so representation overlap would duplicate
// answers at run time.
Cond disjoint_negate(const Conj& d) {
  Cond out = Cond::bottom();
  for (size_t i = 0; i < d.rows.size(); ++i) {
    Conj cell;
    for (size_t j = 0; j < i; ++j) cell.add(d.rows[j]);
    LinForm f = -d.rows[i].form;
    f.constant -= 1;
    cell.add(LinIneq::of(std::move(f)));
    if (!cell.is_falsum() && satisfiable(cell))
      out.disjuncts.push_back(std::move(cell));
  }
  return out;
}

Cond disjoint_negate(const Cond& c) {
  Cond out = Cond::top();
  for (const Conj& d : c.disjuncts) out = conj_cond(out, disjoint_negate(d));
  return out;
}

// The adornment's region as pairwise-disjoint satisfiable cells, each the
// basis of one guarded clause copy: cell_i = d_i /\ not(d_1 \/ ... \/ d_i-1).
std::vector<Conj> disjoint_cells(const Cond& a) {
  std::vector<Conj> out;
  Cond earlier_neg = Cond::top();
  for (const Conj& d : a.disjuncts) {
    Cond cell = conj_cond(Cond::of(d), earlier_neg);
    for (Conj& e : cell.disjuncts) {
      if (!satisfiable(e)) continue;
      // Drop rows the rest of the cell already implies; set-preserving.
      for (size_t i = 0; i < e.rows.size();) {
        Conj rest;
        for (size_t j = 0; j < e.rows.size(); ++j)
          if (j != i) rest.rows.push_back(e.rows[j]);
        LinForm f = -e.rows[i].form;
        f.constant -= 1;
        rest.add(LinIneq::of(std::move(f)));
        if (!satisfiable(rest))
          e.rows.erase(e.rows.begin() + static_cast<long>(i));
        else
          ++i;
      }
      out.push_back(std::move(e));
    }
    earlier_neg = conj_cond(earlier_neg, disjoint_negate(d));
  }
  return out;
}

// A row sum(a_i * x_i) + c >= 0 over instantiated clause variables as a
// source-level comparison with nonnegative constants on both sides.
Literal guard_literal(const LinIneq& row) {
  ExprPtr lhs, rhs;
  auto append = [](ExprPtr& e, ExprPtr t) {
    e = e ? ArithExpr::binary(ArithExpr::Kind::Add, std::move(e), std::move(t))
          : std::move(t);
  };
  for (const auto& [s, k] : row.form.coeff) {
    ExprPtr v = ArithExpr::var_ref(s.text);
    const Int mag = k < 0 ? Int(-k) : k;
    ExprPtr t = mag == 1
                    ? std::move(v)
                    : ArithExpr::binary(ArithExpr::Kind::Mul,
                                        ArithExpr::integer(mag), std::move(v));
    append(k > 0 ? lhs : rhs, std::move(t));
  }
  if (row.form.constant > 0) append(lhs, ArithExpr::integer(row.form.constant));
  if (row.form.constant < 0) append(rhs, ArithExpr::integer(-row.form.constant));
  if (!lhs) lhs = ArithExpr::integer(0);
  if (!rhs) rhs = ArithExpr::integer(0);
  return Literal::make_compare(CmpOp::Ge, std::move(lhs), std::move(rhs));
}

}  // namespace

std::vector<Clause> bridge_clauses(const std::map<std::string, std::vector<Cond>>& sets,
                                   const std::vector<std::string>& cls) {
  std::vector<Clause> out;
  for (const std::string& key : cls) {
    auto it = sets.find(key);
    if (it == sets.end()) continue;
    const std::string name = base_name_of(key);
    const int arity = arity_of(key);
    std::vector<TermPtr> args;
    for (int i = 1; i <= arity; ++i) args.push_back(Term::var("X" + std::to_string(i)));
    for (const Cond& a : it->second) {
      Clause bridge;
      bridge.head = Atom{name, args};
      bridge.body.push_back(Literal::make_call(Atom{adorned_name(name, a), args}));
      out.push_back(std::move(bridge));
    }
  }
  return out;
}

AdornedProgram adorn_program(const Program& p,
                             const std::map<std::string, std::vector<Cond>>& sets,
                             const std::string& target_key, const PosMap& pm,
                             const DependencyGraph& dg) {
  (void)target_key;
  (void)dg;
  AdornedProgram out;
  out.program.directives = p.directives;

  for (size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    const std::string hkey = key_of(c.head);
    const auto head_set = sets.find(hkey);
    const bool head_in = head_set != sets.end();

    // In-class body calls and their adornment choices.
    std::vector<size_t> call_pos;
    for (size_t j = 0; j < c.body.size(); ++j)
      if (c.body[j].kind == Literal::Kind::Call &&
          sets.count(key_of(c.body[j].call)))
        call_pos.push_back(j);

    // Shared parts of the weak consistency check.
    Conj invariant;
    if (head_in) {
      invariant = prefix_rows(c, pm);
      invariant.add_all(fresh_is_rows(c, c.body.size()));
    }

    const Conj prefix = head_in ? prefix_rows(c, pm) : Conj{};

    const size_t head_n = head_in ? head_set->second.size() : 1;
    for (size_t h = 0; h < head_n; ++h) {
      // One clause copy per disjoint case cell of the head adornment. The
      // cell's rows are prepended as comparisons (unless the clause's own
      // guard prefix already implies them), so a ground call runs the body
      // in exactly one copy and answer multiplicities are preserved.
      std::vector<Conj> cells{Conj{}};
      if (head_in) cells = disjoint_cells(head_set->second[h]);

      for (const Conj& cell : cells) {
        Cond head_part = Cond::top();
        std::vector<Literal> guards;
        if (head_in) {
          Cond inst = instantiate(Cond::of(cell), c.head);
          if (inst.disjuncts.empty()) continue;
          head_part = conj_cond(inst, Cond::of(invariant));
          if (!satisfiable(head_part)) continue;
          for (const LinIneq& row : inst.disjuncts.front().rows) {
            Conj probe = prefix;
            LinForm f = -row.form;
            f.constant -= 1;
            probe.add(LinIneq::of(std::move(f)));
            if (satisfiable(probe)) guards.push_back(guard_literal(row));
          }
        }

        std::vector<size_t> choice(call_pos.size(), 0);
        for (;;) {
          Clause cand;
          cand.head = c.head;
          if (head_in)
            cand.head.pred = adorned_name(c.head.pred, head_set->second[h]);
          cand.body = guards;
          cand.body.insert(cand.body.end(), c.body.begin(), c.body.end());
          Cond check = head_part;
          for (size_t k = 0; k < call_pos.size(); ++k) {
            Atom& call = cand.body[guards.size() + call_pos[k]].call;
            const Cond& a = sets.at(key_of(call)).at(choice[k]);
            if (head_in) check = conj_cond(check, instantiate(a, call));
            call.pred = adorned_name(call.pred, a);
          }
          if (!head_in || satisfiable(check)) {
            out.program.clauses.push_back(std::move(cand));
            out.provenance.push_back(ci);
          }
          // Next combination.
          size_t k = 0;
          for (; k < call_pos.size(); ++k) {
            if (++choice[k] < sets.at(key_of(c.body[call_pos[k]].call)).size()) break;
            choice[k] = 0;
          }
          if (k == call_pos.size()) break;
        }
      }
    }
  }

  std::vector<std::string> cls;
  for (const auto& [key, conds] : sets) cls.push_back(key);
  out.bridges = bridge_clauses(sets, cls);
  for (const std::string& key : cls) {
    const std::string name = base_name_of(key);
    const int arity = arity_of(key);
    for (const Cond& a : sets.at(key))
      out.adorned_preds.emplace(adorned_name(name, a) + "/" + std::to_string(arity),
                                std::make_pair(key, a));
  }
  out.program.reindex();
  return out;
}

AdornedProgram remove_irrelevant(const AdornedProgram& pa, const Cond& c,
                                 const std::string& query_key) {
  // Entry points: adornments of the query predicate consistent with c.
  std::set<std::string> roots;
  for (const auto& [akey, info] : pa.adorned_preds)
    if (info.first == query_key && satisfiable(conj_cond(info.second, c)))
      roots.insert(akey);

  // Reachability over the transformed clauses.
  std::set<std::string> reach = roots;
  std::vector<std::string> frontier(roots.begin(), roots.end());
  while (!frontier.empty()) {
    const std::string cur = frontier.back();
    frontier.pop_back();
    auto it = pa.program.clauses_of.find(cur);
    if (it == pa.program.clauses_of.end()) continue;
    for (size_t ci : it->second)
      for (const auto& lit : pa.program.clauses[ci].body)
        if (lit.kind == Literal::Kind::Call) {
          const std::string k = key_of(lit.call);
          if (reach.insert(k).second) frontier.push_back(k);
        }
  }

  AdornedProgram out;
  out.program.directives = pa.program.directives;
  for (size_t i = 0; i < pa.program.clauses.size(); ++i) {
    if (!reach.count(key_of(pa.program.clauses[i].head))) continue;
    out.program.clauses.push_back(pa.program.clauses[i]);
    out.provenance.push_back(pa.provenance[i]);
  }
  for (const Clause& b : pa.bridges) {
    const std::string target = key_of(b.body.front().call);
    if (roots.count(target) || reach.count(key_of(b.head))) out.bridges.push_back(b);
  }
  for (const auto& [akey, info] : pa.adorned_preds)
    if (reach.count(akey) || roots.count(akey)) out.adorned_preds.emplace(akey, info);
  out.program.reindex();
  return out;
}

}  // namespace numloop
