#include "numloop/driver.hpp"

#include <algorithm>
#include <set>

#include "numloop/print.hpp"

namespace numloop {

const char* status_text(AdornmentStatus s) {
  switch (s) {
    case AdornmentStatus::ProvenNonrecursive:
      return "proven_nonrecursive";
    case AdornmentStatus::ProvenAcceptable:
      return "proven_acceptable";
    case AdornmentStatus::Pending:
      return "pending";
    case AdornmentStatus::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

std::string adorned_key(const std::string& query_key, const Cond& a) {
  const size_t slash = query_key.rfind('/');
  return adorned_name(query_key.substr(0, slash), a) + query_key.substr(slash);
}

}  // namespace

std::vector<Cond> proven_by_nonrecursion(const AdornedProgram& pa,
                                         const std::string& query_key,
                                         const std::vector<Cond>& adornments) {
  const DependencyGraph dg = dependency_graph(pa.program);
  std::vector<Cond> out;
  for (const Cond& a : adornments) {
    const std::set<std::string> reach = dg.reachable_from(adorned_key(query_key, a));
    if (std::none_of(reach.begin(), reach.end(),
                     [&](const std::string& r) { return dg.is_recursive(r); }))
      out.push_back(a);
  }
  return out;
}

AdornedProgram adorn_once(const Program& p, const PredRef& query, bool extend) {
  const PosMap pm = integer_positions(p);
  const Program pn = partially_normalise(p, pm);
  const DependencyGraph dg = dependency_graph(pn);
  const InterArgRegistry reg = InterArgRegistry::from_program(pn);
  std::vector<std::string> cls = dg.class_of(query.key());
  if (cls.empty()) cls.push_back(query.key());

  std::map<std::string, std::vector<Cond>> pools;
  for (const std::string& k : cls) pools[k] = collect_guards(pn, k, pm);
  if (extend) pools = extend_adornments(pools, pn, pm, dg, reg, cls);

  std::map<std::string, std::vector<Cond>> sets;
  for (const std::string& k : cls) sets[k] = guard_tuned_set(pools[k]);
  return adorn_program(pn, sets, query.key(), pm, dg);
}

TerminationReport infer(const Program& p, const PredRef& query, const InferOpts& opts) {
  TerminationReport rep;
  rep.query = query;
  const std::string qkey = query.key();

  const PosMap pm = integer_positions(p);
  const Program pn = partially_normalise(p, pm);
  const DependencyGraph dg = dependency_graph(pn);
  const InterArgRegistry reg = InterArgRegistry::from_program(pn);
  std::vector<std::string> cls = dg.class_of(qkey);
  if (cls.empty()) cls.push_back(qkey);

  int limit = 0;
  if (opts.max_iter) {
    limit = std::max(1, *opts.max_iter);
  } else {
    int positions = 0;
    for (const std::string& k : cls)
      if (auto it = pm.find(k); it != pm.end()) positions += static_cast<int>(it->second.size());
    limit = std::max(1, 2 * positions);
  }

  std::map<std::string, std::vector<Cond>> pools;
  for (const std::string& k : cls) pools[k] = collect_guards(pn, k, pm);

  Cond c = Cond::top();
  struct Banked {
    Cond adornment;
    Cond under;
    AdornmentStatus kind;
  };
  std::vector<Banked> bank;

  std::vector<Cond> final_adorns;
  std::vector<AdornmentStatus> final_status;
  std::vector<Cond> final_under;
  bool done = false;

  for (int round = 1; round <= limit && !done; ++round) {
    rep.rounds = round;
    RoundTrace trace;
    trace.round = round;

    auto effective = opts.extend ? extend_adornments(pools, pn, pm, dg, reg, cls) : pools;
    std::map<std::string, std::vector<Cond>> sets;
    for (const std::string& k : cls) sets[k] = guard_tuned_set(effective[k]);
    trace.adornment_sets = sets;

    const AdornedProgram pa_full = adorn_program(pn, sets, qkey, pm, dg);
    const AdornedProgram pa = remove_irrelevant(pa_full, c, qkey);
    trace.adorned_clauses = pa.program.clauses.size();
    trace.bridges = pa.bridges.size();

    const std::vector<Cond> q_adorns = sets.at(qkey);
    std::vector<AdornmentStatus> status(q_adorns.size(), AdornmentStatus::Pending);
    std::vector<Cond> under(q_adorns.size(), c);

    // Regions already ruled out by the accumulated condition are settled at
    // the end from the bank; they are not analyzed this round.
    for (size_t i = 0; i < q_adorns.size(); ++i)
      if (!satisfiable(conj_cond(q_adorns[i], c))) {
        status[i] = AdornmentStatus::Unknown;
        trace.events.push_back("outside accumulated condition: " + render_cond(q_adorns[i]));
      }

    // Corollary-1 shortcut: adornments reaching no recursion at all.
    {
      std::vector<Cond> candidates;
      for (size_t i = 0; i < q_adorns.size(); ++i)
        if (status[i] == AdornmentStatus::Pending) candidates.push_back(q_adorns[i]);
      for (const Cond& a : proven_by_nonrecursion(pa, qkey, candidates)) {
        const size_t i = static_cast<size_t>(
            std::find(q_adorns.begin(), q_adorns.end(), a) - q_adorns.begin());
        status[i] = AdornmentStatus::ProvenNonrecursive;
        under[i] = c;
        bank.push_back({a, c, AdornmentStatus::ProvenNonrecursive});
        trace.events.push_back("proven nonrecursive: " + render_cond(a));
      }
    }

    std::vector<size_t> active;
    for (size_t i = 0; i < q_adorns.size(); ++i)
      if (status[i] == AdornmentStatus::Pending) active.push_back(i);

    bool need_next_round = false;
    while (!active.empty()) {
      // Restrict to what the still-active adornments can reach.
      Cond active_disj = Cond::bottom();
      for (size_t i : active) active_disj = disj_cond(active_disj, q_adorns[i]);
      const AdornedProgram par = remove_irrelevant(pa_full, conj_cond(c, active_disj), qkey);

      std::map<std::string, LevelTemplate> templates;
      for (const auto& [akey, info] : par.adorned_preds)
        templates.emplace(akey, level_template(akey, info.second));

      const auto obls = decrease_obligations(par, pm, reg, templates, {});
      trace.obligations = obls.size();
      const ConstraintSystem system = farkas_system(obls, templates);
      if (opts.emit_constraints) {
        trace.system_dump += "; round " + std::to_string(round) + ", " +
                             std::to_string(obls.size()) + " obligations\n";
        trace.system_dump += render_system(system);
      }

      const SolveOutcome so = solve(system, obls, templates, pm);
      if (so.kind == SolveOutcome::Kind::Solved) {
        std::string witness;
        for (const auto& [cs, v] : so.assignment)
          if (v != 0)
            witness += " c[" + cs.owner + "#" + std::to_string(cs.row) + "]=" + v.str();
        trace.solved_coeffs = so.assignment;
        const auto coeff_of = [&](const CoefSym& cs) {
          auto it = so.assignment.find(cs);
          return it == so.assignment.end() ? Int(0) : it->second;
        };
        for (const auto& o : obls) {
          LinForm margin;
          for (const auto& [cs, f] : o.head_form) {
            LinForm t = f;
            t.scale(coeff_of(cs));
            margin += t;
          }
          for (const auto& [cs, f] : o.call_form) {
            LinForm t = f;
            t.scale(-coeff_of(cs));
            margin += t;
          }
          margin.constant -= 1;
          trace.certificates.push_back({o.head_pred, o.context, std::move(margin)});
        }
        for (size_t i : active) {
          status[i] = AdornmentStatus::ProvenAcceptable;
          under[i] = c;
          bank.push_back({q_adorns[i], c, AdornmentStatus::ProvenAcceptable});
          trace.events.push_back("proven acceptable: " + render_cond(q_adorns[i]) +
                                 (witness.empty() ? "" : " with" + witness));
        }
        active.clear();
      } else if (so.kind == SolveOutcome::Kind::NeedsCondition) {
        std::vector<Cond>& pool = pools[so.proposal_pred];
        const bool fresh_pool =
            std::find(pool.begin(), pool.end(), so.proposal) == pool.end();
        bool c_changed = false;
        if (so.proposal_pred == qkey) {
          Cond cn = simplify(conj_cond(c, so.proposal));
          if (!equivalent(cn, c)) {
            c = std::move(cn);
            c_changed = true;
          }
        }
        if (fresh_pool) pool.push_back(so.proposal);
        trace.events.push_back("proposed condition on " + so.proposal_pred + ": " +
                               render_cond(so.proposal));
        if (fresh_pool || c_changed) {
          need_next_round = true;
        } else {
          // The proposal adds nothing; no refinement is possible.
          for (size_t i : active) status[i] = AdornmentStatus::Unknown;
          trace.events.push_back("proposal made no progress; giving up on the rest");
          active.clear();
        }
        break;
      } else {
        // Failed: blame adornments whose obligations are infeasible alone.
        std::set<std::string> doomed;
        for (const auto& o : obls)
          if (solo_infeasible(o, templates)) doomed.insert(o.head_pred);
        if (doomed.empty()) {
          for (size_t i : active) {
            status[i] = AdornmentStatus::Unknown;
            trace.events.push_back("no level mapping found: " + render_cond(q_adorns[i]));
          }
          active.clear();
          break;
        }
        for (const std::string& d : doomed)
          trace.events.push_back("obligation infeasible in isolation for " + d);
        const DependencyGraph dga = dependency_graph(par.program);
        std::vector<size_t> keep;
        for (size_t i : active) {
          const std::set<std::string> reach =
              dga.reachable_from(adorned_key(qkey, q_adorns[i]));
          const bool hits = std::any_of(doomed.begin(), doomed.end(),
                                        [&](const std::string& d) { return reach.count(d); });
          if (hits) {
            status[i] = AdornmentStatus::Unknown;
            trace.events.push_back("unknown (reaches doomed predicate): " +
                                   render_cond(q_adorns[i]));
          } else {
            keep.push_back(i);
          }
        }
        if (keep.size() == active.size()) {
          // Blame did not touch any active adornment; avoid a livelock.
          for (size_t i : active) status[i] = AdornmentStatus::Unknown;
          active.clear();
          break;
        }
        active = std::move(keep);
      }
    }

    rep.trace.push_back(std::move(trace));
    final_adorns = q_adorns;
    final_status = std::move(status);
    final_under = std::move(under);
    if (!need_next_round) done = true;
  }

  rep.limit_hit = !done;
  if (rep.limit_hit && !rep.trace.empty())
    rep.trace.back().events.push_back("iteration limit reached");

  // Final partition: anything unresolved is settled by bank entailment when
  // a proven region covers it, and is unknown otherwise.
  for (size_t i = 0; i < final_adorns.size(); ++i) {
    AdornmentStatus st = final_status[i];
    Cond u = final_under[i];
    if (st == AdornmentStatus::Pending) st = AdornmentStatus::Unknown;
    if (st == AdornmentStatus::Unknown) {
      for (const Banked& b : bank) {
        if (entails(final_adorns[i], conj_cond(b.adornment, b.under))) {
          st = b.kind;
          u = b.under;
          break;
        }
      }
    }
    rep.outcomes.push_back({final_adorns[i], st, u});
  }

  Cond condition = Cond::bottom();
  for (const Banked& b : bank)
    condition = disj_cond(condition, conj_cond(b.adornment, b.under));
  rep.condition = simplify(condition);
  return rep;
}

}  // namespace numloop
