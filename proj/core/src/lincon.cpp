#include "numloop/lincon.hpp"

#include <algorithm>
#include <set>

#include "numloop/print.hpp"

namespace numloop {

// ---------------------------------------------------------------------------
// Linear forms

void LinForm::add_term(const Sym& s, const Int& c) {
  if (c == 0) return;
  auto [it, fresh] = coeff.emplace(s, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) coeff.erase(it);
  }
}

LinForm& LinForm::operator+=(const LinForm& o) {
  for (const auto& [s, c] : o.coeff) add_term(s, c);
  constant += o.constant;
  return *this;
}

LinForm& LinForm::operator-=(const LinForm& o) {
  for (const auto& [s, c] : o.coeff) add_term(s, -c);
  constant -= o.constant;
  return *this;
}

LinForm LinForm::operator-() const {
  LinForm r;
  for (const auto& [s, c] : coeff) r.coeff.emplace(s, -c);
  r.constant = -constant;
  return r;
}

void LinForm::scale(const Int& k) {
  if (k == 0) {
    coeff.clear();
    constant = 0;
    return;
  }
  for (auto& [s, c] : coeff) c *= k;
  constant *= k;
}

std::optional<LinForm> to_linform(const ArithExpr& e,
                                  const std::function<Sym(const std::string&)>& sym_of) {
  switch (e.kind) {
    case ArithExpr::Kind::Var: {
      LinForm f;
      f.add_term(sym_of(e.var), 1);
      return f;
    }
    case ArithExpr::Kind::IntConst: {
      LinForm f;
      f.constant = e.value;
      return f;
    }
    case ArithExpr::Kind::Neg: {
      auto f = to_linform(*e.lhs, sym_of);
      if (!f) return std::nullopt;
      return -*f;
    }
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub: {
      auto l = to_linform(*e.lhs, sym_of);
      auto r = to_linform(*e.rhs, sym_of);
      if (!l || !r) return std::nullopt;
      if (e.kind == ArithExpr::Kind::Add)
        *l += *r;
      else
        *l -= *r;
      return l;
    }
    case ArithExpr::Kind::Mul: {
      auto l = to_linform(*e.lhs, sym_of);
      auto r = to_linform(*e.rhs, sym_of);
      if (!l || !r) return std::nullopt;
      if (l->is_constant()) {
        r->scale(l->constant);
        return r;
      }
      if (r->is_constant()) {
        l->scale(r->constant);
        return l;
      }
      return std::nullopt;
    }
    case ArithExpr::Kind::Div:
      // Integer division has no exact linear rendering; the caller treats the
      // whole expression as unconstraining.
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical inequalities

static Int int_gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool LinIneq::operator<(const LinIneq& o) const {
  auto it = form.coeff.begin();
  auto jt = o.form.coeff.begin();
  for (; it != form.coeff.end() && jt != o.form.coeff.end(); ++it, ++jt) {
    if (it->first != jt->first) return it->first < jt->first;
    if (it->second != jt->second) return it->second < jt->second;
  }
  if (jt != o.form.coeff.end()) return true;
  if (it != form.coeff.end()) return false;
  return form.constant < o.form.constant;
}

LinIneq LinIneq::of(LinForm f) {
  if (f.coeff.empty()) {
    // Constant rows collapse to the canonical true (0 >= 0) or false (-1 >= 0).
    f.constant = f.constant >= 0 ? Int(0) : Int(-1);
    return LinIneq{std::move(f)};
  }
  Int g = 0;
  for (const auto& [s, c] : f.coeff) g = int_gcd(g, c);
  g = int_gcd(g, f.constant);
  if (g > 1) {
    for (auto& [s, c] : f.coeff) c /= g;
    f.constant /= g;
  }
  return LinIneq{std::move(f)};
}

LinIneq normalize(CmpOp op, const ArithExpr& lhs, const ArithExpr& rhs,
                  const std::function<Sym(const std::string&)>& sym_of) {
  auto l = to_linform(lhs, sym_of);
  auto r = to_linform(rhs, sym_of);
  if (!l || !r) throw InputError("nonlinear expression in comparison");
  LinForm f;
  switch (op) {
    case CmpOp::Lt:  // l < r  ==  r - l - 1 >= 0
      f = *r;
      f -= *l;
      f.constant -= 1;
      break;
    case CmpOp::Gt:  // l > r  ==  l - r - 1 >= 0
      f = *l;
      f -= *r;
      f.constant -= 1;
      break;
    case CmpOp::Le:  // l <= r  ==  r - l >= 0
      f = *r;
      f -= *l;
      break;
    case CmpOp::Ge:  // l >= r  ==  l - r >= 0
      f = *l;
      f -= *r;
      break;
  }
  return LinIneq::of(std::move(f));
}

// ---------------------------------------------------------------------------
// Conjunctions and DNF conditions

Conj Conj::falsum() {
  LinForm f;
  f.constant = -1;
  Conj c;
  c.rows.push_back(LinIneq{std::move(f)});
  return c;
}

bool Conj::is_falsum() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const LinIneq& q) { return q.trivially_false(); });
}

void Conj::add(LinIneq q) {
  if (is_falsum()) return;
  if (q.trivially_true()) return;
  if (q.trivially_false()) {
    *this = falsum();
    return;
  }
  auto it = std::lower_bound(rows.begin(), rows.end(), q);
  if (it != rows.end() && *it == q) return;
  rows.insert(it, std::move(q));
}

void Conj::add_all(const Conj& o) {
  for (const auto& q : o.rows) add(q);
}

bool Cond::is_top() const {
  return std::any_of(disjuncts.begin(), disjuncts.end(),
                     [](const Conj& c) { return c.is_top(); });
}

Cond conj_cond(const Cond& a, const Cond& b) {
  Cond r;
  for (const auto& da : a.disjuncts) {
    for (const auto& db : b.disjuncts) {
      Conj merged = da;
      merged.add_all(db);
      if (merged.is_falsum()) continue;
      if (std::find(r.disjuncts.begin(), r.disjuncts.end(), merged) == r.disjuncts.end())
        r.disjuncts.push_back(std::move(merged));
    }
  }
  return r;
}

Cond disj_cond(const Cond& a, const Cond& b) {
  Cond r = a;
  for (const auto& d : b.disjuncts)
    if (std::find(r.disjuncts.begin(), r.disjuncts.end(), d) == r.disjuncts.end())
      r.disjuncts.push_back(d);
  return r;
}

Cond negate(const Cond& c) {
  Cond acc = Cond::top();
  for (const auto& d : c.disjuncts) {
    // not(row1 /\ row2 /\ ...) = (-row1 - 1 >= 0) \/ (-row2 - 1 >= 0) \/ ...
    Cond neg_d = Cond::bottom();
    for (const auto& row : d.rows) {
      LinForm f = -row.form;
      f.constant -= 1;
      Conj one;
      one.add(LinIneq::of(std::move(f)));
      neg_d.disjuncts.push_back(std::move(one));
    }
    acc = conj_cond(acc, neg_d);
    if (acc.is_bottom()) return acc;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin core

namespace {

constexpr size_t kRowCap = 10000;

struct FmResult {
  std::vector<LinForm> rows;
  bool unsat = false;     // a constant row went negative
  bool overflow = false;  // row cap exceeded
};

// Rows are `form >= 0`. Rows with equal coefficient vectors collapse to the
// strongest (smallest constant).
void dedup_rows(std::vector<LinForm>& rows) {
  std::map<std::map<Sym, Int>, Int> best;
  for (auto& r : rows) {
    auto [it, fresh] = best.emplace(r.coeff, r.constant);
    if (!fresh) it->second = std::min(it->second, r.constant);
  }
  rows.clear();
  for (auto& [coeff, c] : best) {
    LinForm f;
    f.coeff = coeff;
    f.constant = c;
    rows.push_back(std::move(f));
  }
}

FmResult fm_eliminate(std::vector<LinForm> rows, const std::set<Sym>& elim) {
  FmResult res;
  // Canonicalize and screen constants up front.
  {
    std::vector<LinForm> keep;
    for (auto& r : rows) {
      LinIneq q = LinIneq::of(std::move(r));
      if (q.trivially_true()) continue;
      if (q.trivially_false()) {
        res.unsat = true;
        return res;
      }
      keep.push_back(std::move(q.form));
    }
    rows = std::move(keep);
    dedup_rows(rows);
  }
  std::set<Sym> remaining;
  for (const auto& r : rows)
    for (const auto& [s, c] : r.coeff)
      if (elim.count(s)) remaining.insert(s);

  while (!remaining.empty()) {
    // Cheapest variable first: fewest pos*neg combinations.
    Sym pick = *remaining.begin();
    size_t best_cost = SIZE_MAX;
    for (const auto& s : remaining) {
      size_t pos = 0, neg = 0;
      for (const auto& r : rows) {
        auto it = r.coeff.find(s);
        if (it == r.coeff.end()) continue;
        (it->second > 0 ? pos : neg)++;
      }
      size_t cost = pos * neg;
      if (cost < best_cost) {
        best_cost = cost;
        pick = s;
      }
    }

    std::vector<LinForm> pos, neg, rest;
    for (auto& r : rows) {
      auto it = r.coeff.find(pick);
      if (it == r.coeff.end())
        rest.push_back(std::move(r));
      else if (it->second > 0)
        pos.push_back(std::move(r));
      else
        neg.push_back(std::move(r));
    }
    std::vector<LinForm> out = std::move(rest);
    for (const auto& p : pos) {
      Int a = p.coeff.at(pick);
      for (const auto& n : neg) {
        Int b = n.coeff.at(pick);  // b < 0
        // (-b) * p + a * n cancels `pick`.
        LinForm comb = p;
        comb.scale(-b);
        LinForm nb = n;
        nb.scale(a);
        comb += nb;
        LinIneq q = LinIneq::of(std::move(comb));
        if (q.trivially_true()) continue;
        if (q.trivially_false()) {
          res.unsat = true;
          return res;
        }
        out.push_back(std::move(q.form));
        if (out.size() > kRowCap) {
          res.overflow = true;
          return res;
        }
      }
    }
    dedup_rows(out);
    rows = std::move(out);
    remaining.erase(pick);
  }
  res.rows = std::move(rows);
  return res;
}

std::set<Sym> all_syms(const Conj& c) {
  std::set<Sym> s;
  for (const auto& q : c.rows)
    for (const auto& [sym, k] : q.form.coeff) s.insert(sym);
  return s;
}

}  // namespace

bool satisfiable(const Conj& c) {
  if (c.is_falsum()) return false;
  if (c.rows.empty()) return true;
  std::vector<LinForm> rows;
  for (const auto& q : c.rows) rows.push_back(q.form);
  FmResult r = fm_eliminate(std::move(rows), all_syms(c));
  if (r.overflow) return true;  // conservative under the rational relaxation
  return !r.unsat;
}

bool satisfiable(const Cond& c) {
  return std::any_of(c.disjuncts.begin(), c.disjuncts.end(),
                     [](const Conj& d) { return satisfiable(d); });
}

bool entails(const Cond& a, const Cond& b) {
  Cond counter = conj_cond(a, negate(b));
  return !satisfiable(counter);
}

bool equivalent(const Cond& a, const Cond& b) { return entails(a, b) && entails(b, a); }

Conj eliminate(const Conj& c, const std::vector<Sym>& syms) {
  if (c.is_falsum()) return Conj::falsum();
  std::vector<LinForm> rows;
  for (const auto& q : c.rows) rows.push_back(q.form);
  FmResult r = fm_eliminate(std::move(rows), std::set<Sym>(syms.begin(), syms.end()));
  if (r.overflow) throw CapacityError("projection exceeded the row cap");
  if (r.unsat) return Conj::falsum();
  Conj out;
  for (auto& f : r.rows) out.add(LinIneq::of(std::move(f)));
  return out;
}

Conj project_onto(const Conj& c, const std::vector<Sym>& keep) {
  std::set<Sym> keep_set(keep.begin(), keep.end());
  std::vector<Sym> elim;
  for (const auto& s : all_syms(c))
    if (!keep_set.count(s)) elim.push_back(s);
  return eliminate(c, elim);
}

Conj substitute(const Conj& c, const std::map<Sym, LinForm>& map) {
  if (c.is_falsum()) return Conj::falsum();
  Conj out;
  for (const auto& q : c.rows) {
    LinForm f;
    f.constant = q.form.constant;
    for (const auto& [s, k] : q.form.coeff) {
      auto it = map.find(s);
      if (it == map.end()) {
        f.add_term(s, k);
      } else {
        LinForm scaled = it->second;
        scaled.scale(k);
        f += scaled;
      }
    }
    out.add(LinIneq::of(std::move(f)));
    if (out.is_falsum()) return Conj::falsum();
  }
  return out;
}

Cond substitute(const Cond& c, const std::map<Sym, LinForm>& map) {
  Cond out;
  for (const auto& d : c.disjuncts) {
    Conj s = substitute(d, map);
    if (s.is_falsum()) continue;
    if (std::find(out.disjuncts.begin(), out.disjuncts.end(), s) == out.disjuncts.end())
      out.disjuncts.push_back(std::move(s));
  }
  return out;
}

Cond instantiate(const Cond& c, const Atom& atom) {
  std::map<Sym, LinForm> map;
  for (const Sym& s : symbols_of(c)) {
    if (s.kind != Sym::Kind::Denom) continue;
    if (s.index < 1 || static_cast<size_t>(s.index) > atom.args.size())
      throw InputError("condition position $" + std::to_string(s.index) +
                       " out of range for " + atom.pred);
    const TermPtr& arg = atom.args[s.index - 1];
    LinForm f;
    switch (arg->kind) {
      case Term::Kind::Var:
        f.add_term(Sym::var(arg->name), 1);
        break;
      case Term::Kind::IntConst:
        f.constant = arg->value;
        break;
      case Term::Kind::Compound:
        throw InputError("compound argument at integer position " +
                         std::to_string(s.index) + " of " + atom.pred);
    }
    map.emplace(s, std::move(f));
  }
  return substitute(c, map);
}

bool is_partition(const std::vector<Cond>& conds) {
  for (size_t i = 0; i < conds.size(); ++i)
    for (size_t j = i + 1; j < conds.size(); ++j)
      if (satisfiable(conj_cond(conds[i], conds[j]))) return false;
  Cond all = Cond::bottom();
  for (const auto& c : conds) all = disj_cond(all, c);
  return !satisfiable(negate(all));
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

// d entails row?  iff  d /\ not(row) is unsatisfiable. With integer_shift the
// negation uses integrality (not(e >= 0) is e =< -1); without it the probe is
// e =< 0, making a positive answer sound over the rationals as well (at the
// price of keeping rows that merely touch the boundary).
bool conj_entails_row(const Conj& d, const LinIneq& row, bool integer_shift) {
  LinForm f = -row.form;
  if (integer_shift) f.constant -= 1;
  Conj probe = d;
  probe.add(LinIneq::of(std::move(f)));
  return !satisfiable(probe);
}

bool conj_entails_conj(const Conj& a, const Conj& b, bool integer_shift) {
  return std::all_of(b.rows.begin(), b.rows.end(), [&](const LinIneq& row) {
    return conj_entails_row(a, row, integer_shift);
  });
}

}  // namespace

Cond simplify(const Cond& c, bool merge_integer_regions) {
  // Satisfiable disjuncts only.
  std::vector<Conj> ds;
  for (const auto& d : c.disjuncts) {
    if (d.is_top()) return Cond::top();
    if (satisfiable(d)) ds.push_back(d);
  }
  if (ds.empty()) return Cond::bottom();

  // Drop rows entailed by the remaining rows of their disjunct. In the exact
  // mode the entailment check must itself be rationally sound, or the drop
  // could grow the disjunct's rational region.
  for (auto& d : ds) {
    for (size_t i = 0; i < d.rows.size();) {
      Conj rest;
      for (size_t j = 0; j < d.rows.size(); ++j)
        if (j != i) rest.rows.push_back(d.rows[j]);
      if (conj_entails_row(rest, d.rows[i], merge_integer_regions))
        d.rows.erase(d.rows.begin() + static_cast<long>(i));
      else
        ++i;
    }
    if (d.rows.empty()) return Cond::top();
  }

  // Relaxation: a row may be dropped from a disjunct when the points the drop
  // admits are already covered by the condition as a whole.  This is what
  // merges adjacent integer regions, e.g. $1 =< -5 \/ ($1 >= -4 /\ $1 =< 0)
  // into $1 =< 0.  It can only grow the rational region (never the integer
  // one), so callers that need rationally tight shapes opt out.
  for (bool changed = merge_integer_regions; changed;) {
    changed = false;
    Cond whole;
    whole.disjuncts = ds;
    for (size_t i = 0; i < ds.size() && !changed; ++i) {
      for (size_t k = 0; k < ds[i].rows.size() && !changed; ++k) {
        Conj probe;
        for (size_t j = 0; j < ds[i].rows.size(); ++j)
          if (j != k) probe.rows.push_back(ds[i].rows[j]);
        LinForm f = -ds[i].rows[k].form;
        f.constant -= 1;
        probe.add(LinIneq::of(std::move(f)));
        Cond gained;
        gained.disjuncts.push_back(std::move(probe));
        if (entails(gained, whole)) {
          ds[i].rows.erase(ds[i].rows.begin() + static_cast<long>(k));
          if (ds[i].rows.empty()) return Cond::top();
          changed = true;
        }
      }
    }
  }

  // Absorption between disjuncts; on mutual entailment the earlier one wins.
  const bool shift = merge_integer_regions;
  std::vector<bool> dropped(ds.size(), false);
  for (size_t i = 0; i < ds.size(); ++i) {
    for (size_t j = 0; j < ds.size(); ++j) {
      if (i == j || dropped[i] || dropped[j]) continue;
      if (ds[i] == ds[j]) {
        if (i > j) dropped[i] = true;
        continue;
      }
      if (conj_entails_conj(ds[i], ds[j], shift) &&
          (!conj_entails_conj(ds[j], ds[i], shift) || j < i))
        dropped[i] = true;
    }
  }
  Cond out;
  for (size_t i = 0; i < ds.size(); ++i)
    if (!dropped[i]) out.disjuncts.push_back(std::move(ds[i]));

  // A valid disjunction is the canonical true. Validity here is integer
  // validity (the negation shifts by one), so the collapse is also reserved
  // for the region-merging mode.
  if (merge_integer_regions && out.disjuncts.size() > 1 && !satisfiable(negate(out)))
    return Cond::top();

  std::sort(out.disjuncts.begin(), out.disjuncts.end(),
            [](const Conj& a, const Conj& b) { return render_conj(a) < render_conj(b); });
  out.disjuncts.erase(std::unique(out.disjuncts.begin(), out.disjuncts.end()),
                      out.disjuncts.end());
  return out;
}

std::vector<Sym> symbols_of(const Conj& c) {
  std::set<Sym> s = all_syms(c);
  return {s.begin(), s.end()};
}

std::vector<Sym> symbols_of(const Cond& c) {
  std::set<Sym> s;
  for (const auto& d : c.disjuncts)
    for (const auto& q : d.rows)
      for (const auto& [sym, k] : q.form.coeff) s.insert(sym);
  return {s.begin(), s.end()};
}

bool holds_at(const Conj& c, const std::map<Sym, Int>& point) {
  for (const auto& q : c.rows) {
    Int v = q.form.constant;
    for (const auto& [s, k] : q.form.coeff) v += k * point.at(s);
    if (v < 0) return false;
  }
  return true;
}

bool holds_at(const Cond& c, const std::map<Sym, Int>& point) {
  return std::any_of(c.disjuncts.begin(), c.disjuncts.end(),
                     [&](const Conj& d) { return holds_at(d, point); });
}

}  // namespace numloop
