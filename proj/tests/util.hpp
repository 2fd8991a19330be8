// Shared helpers for the test suites.
#pragma once

#include <string>
#include <vector>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"
#include "numloop/parse.hpp"
#include "numloop/print.hpp"

namespace testutil {

using namespace numloop;

// Ground query atom p(v1, ..., vk).
inline Atom atom(std::string pred, const std::vector<long>& vals) {
  Atom a;
  a.pred = std::move(pred);
  for (long v : vals) a.args.push_back(Term::integer(Int(v)));
  return a;
}

inline std::vector<Atom> query(std::string pred, const std::vector<long>& vals) {
  return {atom(std::move(pred), vals)};
}

// Condition over the denominators of `pred`, e.g. cond("$1 >= 0", "q/2").
inline Cond cond(const std::string& text, const std::string& pred_key) {
  auto slash = pred_key.rfind('/');
  PredRef r{pred_key.substr(0, slash), std::stoi(pred_key.substr(slash + 1))};
  return parse_condition(text, r);
}

}  // namespace testutil
