// Interargument relations: exact relations for arithmetic builtins and
// user-declared relations for library predicates.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"
#include "numloop/prep.hpp"

namespace numloop {

class InterArgRegistry {
 public:
  // Loads `:- interarg` directives. Throws InputError when a declared
  // condition mentions a position outside the predicate's arity.
  static InterArgRegistry from_program(const Program& p);

  // Declared condition over the predicate's denominators, or top.
  Cond relation_for(const std::string& pred_key) const;
  bool has(const std::string& pred_key) const;

 private:
  std::map<std::string, Cond> declared_;
};

// The constraint a builtin literal guarantees about its variables on
// success: a linear Compare yields its inequality, a linear IsBinding yields
// the target-equals-expression pair, and anything nonlinear yields top.
Conj builtin_relation(const Literal& lit);

}  // namespace numloop
