// Shared generators for the semantics and property suites: sample loading,
// bridge merging, ground query boxes, random conditions with a brute-force
// point sweep, and a random-program source for preservation checks.
#pragma once

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "numloop/adorn.hpp"
#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"
#include "numloop/parse.hpp"
#include "util.hpp"

namespace testutil {

using namespace numloop;

inline Program load_sample(const std::string& name) {
  std::ifstream in(std::string(SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

inline Program with_bridges(const AdornedProgram& pa) {
  Program merged = pa.program;
  for (const auto& b : pa.bridges) merged.clauses.push_back(b);
  merged.reindex();
  return merged;
}

// Every ground tuple in [lo,hi]^arity as a one-atom query.
inline std::vector<std::vector<Atom>> box_queries(const PredRef& q, long lo,
                                                  long hi) {
  std::vector<std::vector<Atom>> out;
  std::vector<long> tuple(static_cast<size_t>(q.arity), lo);
  for (;;) {
    out.push_back(query(q.name, tuple));
    size_t i = 0;
    for (; i < tuple.size(); ++i) {
      if (tuple[i] < hi) {
        ++tuple[i];
        break;
      }
      tuple[i] = lo;
    }
    if (i == tuple.size()) break;
  }
  return out;
}

// Random conjunction over the given variables: up to `max_rows` rows with
// coefficients in [-3,3] and constants in [-8,8].
inline Conj random_conj(std::mt19937& rng, const std::vector<std::string>& vars,
                        int max_rows) {
  std::uniform_int_distribution<int> nrows(0, max_rows);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> cons(-8, 8);
  Conj out;
  const int n = nrows(rng);
  for (int i = 0; i < n; ++i) {
    LinForm f;
    for (const auto& name : vars) f.add_term(Sym::var(name), Int(coeff(rng)));
    f.constant = cons(rng);
    out.add(LinIneq::of(std::move(f)));
  }
  return out;
}

inline Cond random_cond(std::mt19937& rng, const std::vector<std::string>& vars,
                        int max_disjuncts, int max_rows) {
  std::uniform_int_distribution<int> nd(1, max_disjuncts);
  Cond out;
  const int n = nd(rng);
  for (int i = 0; i < n; ++i)
    out.disjuncts.push_back(random_conj(rng, vars, max_rows));
  return out;
}

// Calls fn with every integer point of [lo,hi]^vars.
template <typename Fn>
void sweep(const std::vector<std::string>& vars, long lo, long hi, Fn fn) {
  std::vector<long> tuple(vars.size(), lo);
  for (;;) {
    std::map<Sym, Int> point;
    for (size_t i = 0; i < vars.size(); ++i)
      point[Sym::var(vars[i])] = Int(tuple[i]);
    fn(point);
    size_t k = 0;
    for (; k < tuple.size(); ++k) {
      if (++tuple[k] <= hi) break;
      tuple[k] = lo;
    }
    if (k == tuple.size()) break;
  }
}

// ---------------------------------------------------------------------------
// Random program generator. Programs stay within the analyzable fragment:
// ground integer queries, comparisons and is-bindings over already-bound
// variables only, so in-class calls always receive ground arguments.

struct Gen {
  std::mt19937 rng;
  explicit Gen(uint32_t seed) : rng(seed) {}

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }
  bool chance(int percent) { return pick(1, 100) <= percent; }

  ExprPtr linear_expr(const std::vector<std::string>& vars) {
    ExprPtr e = ArithExpr::var_ref(vars[static_cast<size_t>(
        pick(0, static_cast<int>(vars.size()) - 1))]);
    const int shape = pick(0, 3);
    if (shape == 0) return e;
    if (shape == 1)
      return ArithExpr::binary(ArithExpr::Kind::Add, e,
                               ArithExpr::integer(pick(-8, 8)));
    if (shape == 2)
      return ArithExpr::binary(ArithExpr::Kind::Sub, e,
                               ArithExpr::integer(pick(1, 8)));
    return ArithExpr::binary(ArithExpr::Kind::Mul,
                             ArithExpr::integer(pick(-2, 2)), e);
  }

  Literal compare(const std::vector<std::string>& vars) {
    static const CmpOp ops[] = {CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge};
    return Literal::make_compare(ops[pick(0, 3)], linear_expr(vars),
                                 ArithExpr::integer(pick(-8, 8)));
  }

  Program make(int index) {
    Program p;
    const int arity = pick(1, 2);
    const bool mutual = chance(25);
    const std::string second = mutual ? "r" : "p";

    const int n_clauses = pick(1, 4);
    for (int ci = 0; ci < n_clauses; ++ci) {
      Clause c;
      const bool head_second = mutual && ci % 2 == 1;
      c.head.pred = head_second ? "r" : "p";
      std::vector<std::string> bound;
      for (int a = 0; a < arity; ++a) {
        bound.push_back("V" + std::to_string(a));
        c.head.args.push_back(Term::var(bound.back()));
      }

      const int n_guards = pick(0, 2);
      for (int g = 0; g < n_guards; ++g) c.body.push_back(compare(bound));

      // A few is-bindings; roughly a tenth are nonlinear. A squared variable
      // is boxed into [-5,5] first: an unguarded square in a loop doubles the
      // value's bit-width every call, which the step budget cannot contain.
      const int n_is = pick(0, 2);
      for (int b = 0; b < n_is; ++b) {
        std::string fresh = "W" + std::to_string(ci) + "_" + std::to_string(b);
        ExprPtr rhs;
        if (chance(10)) {
          const std::string& base = bound[static_cast<size_t>(
              pick(0, static_cast<int>(bound.size()) - 1))];
          c.body.push_back(Literal::make_compare(
              CmpOp::Le, ArithExpr::var_ref(base), ArithExpr::integer(5)));
          c.body.push_back(Literal::make_compare(
              CmpOp::Ge, ArithExpr::var_ref(base), ArithExpr::integer(-5)));
          rhs = ArithExpr::binary(ArithExpr::Kind::Mul,
                                  ArithExpr::var_ref(base),
                                  ArithExpr::var_ref(base));
        } else {
          rhs = linear_expr(bound);
        }
        c.body.push_back(Literal::make_is(fresh, rhs));
        bound.push_back(fresh);
      }

      // Recursive clauses always carry at least one guard so random loops
      // stay cheap to explore under the step budget.
      const bool recurse = chance(70);
      if (recurse) {
        if (n_guards == 0) c.body.insert(c.body.begin(), compare(bound));
        Atom call;
        call.pred = head_second || (mutual && chance(50)) ? "p" : second;
        for (int a = 0; a < arity; ++a) {
          if (chance(15)) {
            call.args.push_back(Term::integer(pick(-8, 8)));
          } else {
            call.args.push_back(Term::var(bound[static_cast<size_t>(
                pick(0, static_cast<int>(bound.size()) - 1))]));
          }
        }
        c.body.push_back(Literal::make_call(call));
      }
      p.clauses.push_back(std::move(c));
    }

    // Make sure both predicates of a mutual pair exist.
    if (mutual) {
      bool has_r = false;
      for (const auto& c : p.clauses) has_r |= c.head.pred == "r";
      if (!has_r) {
        Clause c;
        c.head.pred = "r";
        for (int a = 0; a < arity; ++a)
          c.head.args.push_back(Term::var("V" + std::to_string(a)));
        p.clauses.push_back(std::move(c));
      }
    }

    if (chance(20)) {
      Directive d;
      d.kind = Directive::Kind::IntPos;
      d.pred = PredRef{"p", arity};
      for (int a = 1; a <= arity; ++a) d.positions.push_back(a);
      p.directives.push_back(std::move(d));
    }

    Directive az;
    az.kind = Directive::Kind::Analyze;
    az.pred = PredRef{"p", arity};
    p.directives.push_back(std::move(az));
    p.reindex();
    (void)index;
    return p;
  }
};

}  // namespace testutil
