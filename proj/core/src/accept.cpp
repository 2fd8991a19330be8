#include "numloop/accept.hpp"

#include <algorithm>

#include "numloop/print.hpp"
#include "numloop/simplex.hpp"

namespace numloop {

namespace {

std::string key_of(const Atom& a) { return a.pred + "/" + std::to_string(a.args.size()); }

// A template primitive (over denominators) applied to concrete atom
// arguments, yielding a form over the clause's variables.
LinForm apply_primitive(const LinForm& prim, const Atom& atom) {
  LinForm out;
  out.constant = prim.constant;
  for (const auto& [s, k] : prim.coeff) {
    if (s.kind != Sym::Kind::Denom) {
      out.add_term(s, k);
      continue;
    }
    const TermPtr& arg = atom.args[static_cast<size_t>(s.index) - 1];
    switch (arg->kind) {
      case Term::Kind::Var:
        out.add_term(Sym::var(arg->name), k);
        break;
      case Term::Kind::IntConst:
        out.constant += k * arg->value;
        break;
      case Term::Kind::Compound:
        throw InputError("compound argument at integer position " +
                         std::to_string(s.index) + " of " + atom.pred);
    }
  }
  return out;
}

std::vector<std::pair<CoefSym, LinForm>> apply_template(const LevelTemplate& t,
                                                        const Atom& atom) {
  std::vector<std::pair<CoefSym, LinForm>> out;
  for (size_t r = 0; r < t.prims.size(); ++r)
    out.emplace_back(CoefSym{t.owner, r}, apply_primitive(t.prims[r], atom));
  return out;
}

}  // namespace

LevelTemplate level_template(const std::string& adorned_key, const Cond& adornment) {
  LevelTemplate t;
  t.owner = adorned_key;
  // Proper disjunctions get the zero level mapping: no conjunct is
  // guaranteed nonnegative under the adornment, so no primitive is usable.
  if (!adornment.single_conj()) return t;
  for (const LinIneq& row : adornment.disjuncts.front().rows) t.prims.push_back(row.form);
  return t;
}

std::vector<DecreaseObligation> decrease_obligations(
    const AdornedProgram& pa, const PosMap& pm, const InterArgRegistry& reg,
    const std::map<std::string, LevelTemplate>& templates,
    const std::vector<size_t>& clause_filter) {
  const DependencyGraph dg = dependency_graph(pa.program);

  std::vector<size_t> indices = clause_filter;
  if (indices.empty())
    for (size_t i = 0; i < pa.program.clauses.size(); ++i) indices.push_back(i);

  // Unadorned predicates (outside the analyzed class) carry the zero level
  // mapping: their recursive calls still produce obligations, which are only
  // dischargeable when the context is infeasible. This keeps reachable
  // recursion below the class from being silently assumed terminating.
  static const LevelTemplate empty_template;
  auto template_of = [&](const std::string& key) -> const LevelTemplate& {
    auto it = templates.find(key);
    return it == templates.end() ? empty_template : it->second;
  };

  std::vector<DecreaseObligation> out;
  for (size_t ci : indices) {
    const Clause& c = pa.program.clauses[ci];
    const std::string hkey = key_of(c.head);
    auto head_info = pa.adorned_preds.find(hkey);
    const bool head_adorned = head_info != pa.adorned_preds.end();

    // Head variable -> denominator mapping (base predicate positions).
    const std::string base_key = head_adorned ? head_info->second.first : hkey;
    std::map<Sym, Sym> head_denoms;
    if (auto it = pm.find(base_key); it != pm.end()) {
      for (int pos : it->second) {
        const TermPtr& t = c.head.args[static_cast<size_t>(pos) - 1];
        if (t->kind == Term::Kind::Var)
          head_denoms.emplace(Sym::var(t->name), Sym::denom(base_key, pos));
      }
    }

    // Context grows left to right; snapshot it at each recursive call.
    Cond ctx = head_adorned ? instantiate(head_info->second.second, c.head)
                            : Cond::top();
    for (size_t j = 0; j < c.body.size() && !ctx.is_bottom(); ++j) {
      const Literal& lit = c.body[j];
      if (lit.kind != Literal::Kind::Call) {
        ctx = conj_cond(ctx, Cond::of(builtin_relation(lit)));
        continue;
      }
      const std::string ck = key_of(lit.call);
      auto callee_info = pa.adorned_preds.find(ck);

      if (dg.same_class(hkey, ck) && dg.is_recursive(hkey)) {
        for (const Conj& d : ctx.disjuncts) {
          if (!satisfiable(d)) continue;  // vacuous branch
          DecreaseObligation o;
          o.clause_idx = ci;
          o.body_pos = j;
          o.head_pred = hkey;
          o.callee_pred = ck;
          o.context = d;
          o.head_form = apply_template(template_of(hkey), c.head);
          o.call_form = apply_template(template_of(ck), lit.call);
          o.head_denoms = head_denoms;
          out.push_back(std::move(o));
        }
      }

      // The call's own guarantee joins the context for later literals.
      if (callee_info != pa.adorned_preds.end())
        ctx = conj_cond(ctx, instantiate(callee_info->second.second, lit.call));
      else if (reg.has(ck))
        ctx = conj_cond(ctx, instantiate(reg.relation_for(ck), lit.call));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Farkas reduction

ConstraintSystem farkas_system(const std::vector<DecreaseObligation>& obls,
                               const std::map<std::string, LevelTemplate>& templates) {
  ConstraintSystem s;
  std::map<CoefSym, size_t> coef_index;
  for (const auto& [key, t] : templates)
    for (size_t r = 0; r < t.prims.size(); ++r) {
      coef_index.emplace(CoefSym{key, r}, s.coeffs.size());
      s.coeffs.push_back(CoefSym{key, r});
      s.var_names.push_back("c[" + key + "#" + std::to_string(r) + "]");
    }

  // Column layout: coefficients, then per obligation its multipliers + slack.
  size_t ncols = s.coeffs.size();
  std::vector<size_t> block_at(obls.size());
  for (size_t i = 0; i < obls.size(); ++i) {
    block_at[i] = ncols;
    for (size_t m = 0; m < obls[i].context.rows.size(); ++m)
      s.var_names.push_back("l" + std::to_string(i) + "_" + std::to_string(m));
    s.var_names.push_back("s" + std::to_string(i));
    ncols += obls[i].context.rows.size() + 1;
  }
  s.lp.nvars = ncols;

  for (size_t i = 0; i < obls.size(); ++i) {
    const DecreaseObligation& o = obls[i];
    // Net head-minus-call form per coefficient symbol.
    std::map<CoefSym, LinForm> delta;
    for (const auto& [cs, f] : o.head_form) delta[cs] += f;
    for (const auto& [cs, f] : o.call_form) delta[cs] -= f;

    std::set<Sym> vars;
    for (const auto& [cs, f] : delta)
      for (const auto& [v, k] : f.coeff) vars.insert(v);
    for (const auto& row : o.context.rows)
      for (const auto& [v, k] : row.form.coeff) vars.insert(v);

    // One equation per variable: sum(delta[v] * c) - sum(ctx[v] * lambda) = 0.
    for (const Sym& v : vars) {
      std::vector<Rat> row(ncols, Rat(0));
      bool nonzero = false;
      for (const auto& [cs, f] : delta) {
        auto it = f.coeff.find(v);
        if (it == f.coeff.end() || it->second == 0) continue;
        row[coef_index.at(cs)] += Rat(it->second);
        nonzero = true;
      }
      for (size_t m = 0; m < o.context.rows.size(); ++m) {
        auto it = o.context.rows[m].form.coeff.find(v);
        if (it == o.context.rows[m].form.coeff.end() || it->second == 0) continue;
        row[block_at[i] + m] -= Rat(it->second);
        nonzero = true;
      }
      if (!nonzero) continue;
      s.lp.rows.push_back(std::move(row));
      s.lp.rhs.push_back(Rat(0));
    }

    // Constant equation: sum(delta.const * c) - sum(ctx.const * lambda) - s = 1.
    std::vector<Rat> crow(ncols, Rat(0));
    for (const auto& [cs, f] : delta)
      if (f.constant != 0) crow[coef_index.at(cs)] += Rat(f.constant);
    for (size_t m = 0; m < o.context.rows.size(); ++m)
      if (o.context.rows[m].form.constant != 0)
        crow[block_at[i] + m] -= Rat(o.context.rows[m].form.constant);
    crow[block_at[i] + o.context.rows.size()] = Rat(-1);  // slack
    s.lp.rows.push_back(std::move(crow));
    s.lp.rhs.push_back(Rat(1));
  }

  // Minimize the sum of the coefficient symbols for small witnesses.
  s.lp.objective.assign(ncols, Rat(0));
  for (size_t j = 0; j < s.coeffs.size(); ++j) s.lp.objective[j] = 1;
  return s;
}

std::string render_system(const ConstraintSystem& s) {
  std::string out;
  for (size_t i = 0; i < s.lp.rows.size(); ++i) {
    std::string line;
    for (size_t j = 0; j < s.lp.nvars; ++j) {
      const Rat& v = s.lp.rows[i][j];
      if (v == 0) continue;
      if (line.empty()) {
        if (v == 1)
          line += s.var_names[j];
        else if (v == -1)
          line += "-" + s.var_names[j];
        else
          line += v.str() + "*" + s.var_names[j];
      } else {
        line += v > 0 ? " + " : " - ";
        Rat a = v > 0 ? v : Rat(-v);
        if (a != 1) line += a.str() + "*";
        line += s.var_names[j];
      }
    }
    if (line.empty()) line = "0";
    out += line + " = " + s.lp.rhs[i].str() + "\n";
  }
  if (!s.coeffs.empty()) {
    out += "minimize:";
    for (size_t j = 0; j < s.coeffs.size(); ++j)
      out += (j ? " + " : " ") + s.var_names[j];
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solving and proposals

namespace {

bool entails_row(const Conj& ctx, const LinIneq& row) {
  LinForm f = -row.form;
  f.constant -= 1;
  Conj probe = ctx;
  probe.add(LinIneq::of(std::move(f)));
  return !satisfiable(probe);
}

}  // namespace

std::optional<std::pair<Cond, std::string>> propose_condition(
    const std::vector<DecreaseObligation>& obls,
    const std::map<std::string, LevelTemplate>& templates, const PosMap& pm) {
  (void)pm;
  // Template terms in global order; proposals come from self-loop
  // obligations, where both sides instantiate the same template.
  std::vector<CoefSym> terms;
  for (const auto& [key, t] : templates)
    for (size_t r = 0; r < t.prims.size(); ++r) terms.push_back(CoefSym{key, r});

  for (const CoefSym& t : terms) {
    for (const DecreaseObligation& o : obls) {
      if (o.head_pred != o.callee_pred || o.head_pred != t.owner) continue;
      auto find_form = [&](const std::vector<std::pair<CoefSym, LinForm>>& forms)
          -> const LinForm* {
        for (const auto& [cs, f] : forms)
          if (cs == t) return &f;
        return nullptr;
      };
      const LinForm* fh = find_form(o.head_form);
      const LinForm* fc = find_form(o.call_form);
      if (!fh || !fc) continue;
      LinForm r = *fh;
      r -= *fc;
      if (r.is_zero()) continue;

      // Require a decrease of at least one along this term and see what that
      // demands of the head's integer arguments.
      r.constant -= 1;
      Conj probe = o.context;
      probe.add(LinIneq::of(std::move(r)));
      if (probe.is_falsum()) continue;

      std::vector<Sym> keep;
      std::map<Sym, LinForm> rename;
      std::string base_key;
      for (const auto& [var, denom] : o.head_denoms) {
        keep.push_back(var);
        LinForm f;
        f.add_term(denom, 1);
        rename.emplace(var, std::move(f));
        base_key = denom.text;
      }
      if (keep.empty()) continue;

      Conj proj = project_onto(probe, keep);
      if (proj.is_falsum()) continue;
      Conj ctx_proj = project_onto(o.context, keep);

      Conj kept;
      for (const LinIneq& row : proj.rows)
        if (!entails_row(ctx_proj, row)) kept.add(row);
      if (kept.rows.empty() || kept.is_falsum()) continue;

      Conj together = ctx_proj;
      together.add_all(kept);
      if (!satisfiable(together)) continue;

      Conj renamed = substitute(kept, rename);
      const std::vector<Sym> syms = symbols_of(renamed);
      if (std::none_of(syms.begin(), syms.end(),
                       [](const Sym& s) { return s.kind == Sym::Kind::Denom; }))
        continue;
      return std::make_pair(simplify(Cond::of(renamed)), base_key);
    }
  }
  return std::nullopt;
}

SolveOutcome solve(const ConstraintSystem& s,
                   const std::vector<DecreaseObligation>& obls,
                   const std::map<std::string, LevelTemplate>& templates,
                   const PosMap& pm) {
  SolveOutcome out;
  auto sol = solve_lp(s.lp);
  if (sol) {
    out.kind = SolveOutcome::Kind::Solved;
    Int scale = 1;
    for (size_t j = 0; j < s.coeffs.size(); ++j)
      scale = lcm(scale, denominator((*sol)[j]));
    for (size_t j = 0; j < s.coeffs.size(); ++j) {
      const Rat& v = (*sol)[j];
      out.assignment[s.coeffs[j]] = numerator(v) * (scale / denominator(v));
    }
    return out;
  }
  if (auto prop = propose_condition(obls, templates, pm)) {
    out.kind = SolveOutcome::Kind::NeedsCondition;
    out.proposal = prop->first;
    out.proposal_pred = prop->second;
    return out;
  }
  out.kind = SolveOutcome::Kind::Failed;
  return out;
}

bool solo_infeasible(const DecreaseObligation& o,
                     const std::map<std::string, LevelTemplate>& templates) {
  ConstraintSystem s = farkas_system({o}, templates);
  return !solve_lp(s.lp).has_value();
}

}  // namespace numloop
