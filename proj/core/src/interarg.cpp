#include "numloop/interarg.hpp"

#include "numloop/parse.hpp"

namespace numloop {

InterArgRegistry InterArgRegistry::from_program(const Program& p) {
  InterArgRegistry reg;
  for (const auto& d : p.directives) {
    if (d.kind != Directive::Kind::InterArg) continue;
    Cond cond = parse_condition(d.condition_text, d.pred);
    for (const Sym& s : symbols_of(cond))
      if (s.kind == Sym::Kind::Denom && (s.index < 1 || s.index > d.pred.arity))
        throw InputError("interarg condition for " + d.pred.key() +
                         " mentions position $" + std::to_string(s.index));
    auto [it, fresh] = reg.declared_.emplace(d.pred.key(), cond);
    if (!fresh) it->second = conj_cond(it->second, cond);  // multiple declarations conjoin
  }
  return reg;
}

Cond InterArgRegistry::relation_for(const std::string& pred_key) const {
  auto it = declared_.find(pred_key);
  return it == declared_.end() ? Cond::top() : it->second;
}

bool InterArgRegistry::has(const std::string& pred_key) const {
  return declared_.count(pred_key) != 0;
}

Conj builtin_relation(const Literal& lit) {
  // `div` and variable products have no exact linear form; such literals
  // guarantee nothing usable, hence top.
  auto sym_of = [](const std::string& v) { return Sym::var(v); };
  Conj out;
  switch (lit.kind) {
    case Literal::Kind::Compare:
      if (to_linform(*lit.lhs, sym_of) && to_linform(*lit.rhs, sym_of))
        out.add(normalize(lit.op, *lit.lhs, *lit.rhs, sym_of));
      break;
    case Literal::Kind::Is: {
      auto rhs = to_linform(*lit.rhs, sym_of);
      if (!rhs) break;
      // V = rhs, as the >= / =< row pair.
      LinForm v;
      v.add_term(Sym::var(lit.is_var), 1);
      LinForm ge = v;
      ge -= *rhs;
      LinForm le = *rhs;
      le -= v;
      out.add(LinIneq::of(std::move(ge)));
      out.add(LinIneq::of(std::move(le)));
      break;
    }
    case Literal::Kind::Call:
      break;
  }
  return out;
}

}  // namespace numloop
