// Parser for the analyzed language and for symbolic conditions.
#pragma once

#include <string>

#include "numloop/ast.hpp"
#include "numloop/lincon.hpp"

namespace numloop {

// Parses a full program: clauses, directives, comments. Clause order is
// preserved. Surface `=` comparisons are desugared into a =< / >= pair.
// Throws InputError with line/column on malformed input, on arity
// disagreements between uses of a predicate, and on directives that
// reference unknown predicates.
Program parse_program(const std::string& text);

// Parses a symbolic condition over `$i` denominators (scope `pred`) in the
// grammar shared with the renderer: comparisons over linear arithmetic,
// `/\`, `\/`, `true`, `false`. Nonlinear atoms are rejected.
Cond parse_condition(const std::string& text, const PredRef& pred);

// Same grammar, but atoms range over named variables instead of denominators.
Cond parse_var_condition(const std::string& text);

}  // namespace numloop
