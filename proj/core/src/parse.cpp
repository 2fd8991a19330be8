#include "numloop/parse.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <vector>

namespace numloop {

namespace {

enum class Tok {
  End, Ident, Var, Int, Denom, String,
  LParen, RParen, LBracket, RBracket, Comma, Period,
  Neck,                          // :-
  Lt, Gt, Le, Ge, Eq,
  Plus, Minus, Star, Slash,
  And, Or,                       // /\ and \/
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // Ident/Var/String payload
  Int value = 0;     // Int payload, Denom index
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Ident;
        t.text = lex_ident();
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Var;
        t.text = lex_name();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        t.value = lex_int();
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string lex_name() {
    std::string s;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        s += c;
        advance();
      } else {
        break;
      }
    }
    return s;
  }

  // An identifier directly followed by `{` is an adorned name; the braced
  // condition text is part of the name so adorned programs re-parse.
  std::string lex_ident() {
    std::string s = lex_name();
    if (pos_ < src_.size() && src_[pos_] == '{') {
      int depth = 0;
      do {
        char c = src_[pos_];
        if (c == '{') ++depth;
        if (c == '}') --depth;
        s += c;
        advance();
        if (pos_ >= src_.size() && depth > 0)
          throw InputError("unterminated adorned name", line_, col_);
      } while (depth > 0);
    }
    return s;
  }

  Int lex_int() {
    std::string s;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      s += src_[pos_];
      advance();
    }
    return Int(s);
  }

  void lex_punct(Token& t) {
    char c = src_[pos_];
    auto two = [&](char next) {
      return pos_ + 1 < src_.size() && src_[pos_ + 1] == next;
    };
    switch (c) {
      case '(': t.kind = Tok::LParen; advance(); return;
      case ')': t.kind = Tok::RParen; advance(); return;
      case '[': t.kind = Tok::LBracket; advance(); return;
      case ']': t.kind = Tok::RBracket; advance(); return;
      case ',': t.kind = Tok::Comma; advance(); return;
      case '.': t.kind = Tok::Period; advance(); return;
      case '+': t.kind = Tok::Plus; advance(); return;
      case '-': t.kind = Tok::Minus; advance(); return;
      case '*': t.kind = Tok::Star; advance(); return;
      case '<': t.kind = Tok::Lt; advance(); return;
      case ':':
        if (two('-')) {
          t.kind = Tok::Neck;
          advance();
          advance();
          return;
        }
        break;
      case '>':
        if (two('=')) {
          t.kind = Tok::Ge;
          advance();
          advance();
          return;
        }
        t.kind = Tok::Gt;
        advance();
        return;
      case '=':
        if (two('<')) {
          t.kind = Tok::Le;
          advance();
          advance();
          return;
        }
        t.kind = Tok::Eq;
        advance();
        return;
      case '/':
        if (two('\\')) {
          t.kind = Tok::And;
          advance();
          advance();
          return;
        }
        t.kind = Tok::Slash;
        advance();
        return;
      case '\\':
        if (two('/')) {
          t.kind = Tok::Or;
          advance();
          advance();
          return;
        }
        break;
      case '$': {
        advance();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          throw InputError("expected digits after '$'", line_, col_);
        t.kind = Tok::Denom;
        t.value = lex_int();
        return;
      }
      case '"': {
        advance();
        std::string s;
        while (pos_ < src_.size() && src_[pos_] != '"') {
          s += src_[pos_];
          advance();
        }
        if (pos_ >= src_.size()) throw InputError("unterminated string", t.line, t.column);
        advance();
        t.kind = Tok::String;
        t.text = std::move(s);
        return;
      }
      default: break;
    }
    throw InputError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

  Program parse_program() {
    Program prog;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Neck) {
        prog.directives.push_back(parse_directive());
      } else {
        prog.clauses.push_back(parse_clause());
      }
    }
    prog.reindex();
    check_arities(prog);
    check_directives(prog);
    return prog;
  }

  Cond parse_condition_entry(const std::optional<PredRef>& scope) {
    Cond c = parse_cond(scope);
    expect(Tok::End, "end of condition");
    return c;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw InputError(msg, at.line, at.column);
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, peek());
    return next();
  }

  Directive parse_directive() {
    Token neck = expect(Tok::Neck, "':-'");
    Token name = expect(Tok::Ident, "directive name");
    Directive d;
    d.line = neck.line;
    if (name.text == "analyze") {
      d.kind = Directive::Kind::Analyze;
    } else if (name.text == "intpos") {
      d.kind = Directive::Kind::IntPos;
    } else if (name.text == "interarg") {
      d.kind = Directive::Kind::InterArg;
    } else {
      fail("unknown directive '" + name.text + "'", name);
    }
    expect(Tok::LParen, "'('");
    d.pred = parse_pred_ref();
    if (d.kind == Directive::Kind::IntPos) {
      expect(Tok::Comma, "','");
      expect(Tok::LBracket, "'['");
      for (;;) {
        Token n = expect(Tok::Int, "argument position");
        int idx = static_cast<int>(n.value);
        if (idx < 1 || idx > d.pred.arity)
          fail("position out of range for " + d.pred.key(), n);
        d.positions.push_back(idx);
        if (peek().kind != Tok::Comma) break;
        next();
      }
      expect(Tok::RBracket, "']'");
    } else if (d.kind == Directive::Kind::InterArg) {
      expect(Tok::Comma, "','");
      Token s = expect(Tok::String, "quoted condition");
      d.condition_text = s.text;
      // Validated eagerly so the error points at the directive.
      try {
        numloop::parse_condition(d.condition_text, d.pred);
      } catch (const InputError& e) {
        fail(std::string("in interarg condition: ") + e.what(), s);
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Period, "'.'");
    return d;
  }

  PredRef parse_pred_ref() {
    Token name = expect(Tok::Ident, "predicate name");
    expect(Tok::Slash, "'/'");
    Token ar = expect(Tok::Int, "arity");
    return PredRef{name.text, static_cast<int>(ar.value)};
  }

  Clause parse_clause() {
    Clause c;
    c.head = parse_atom();
    if (peek().kind == Tok::Neck) {
      next();
      for (;;) {
        parse_literal(c.body);
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::Period, "'.'");
    return c;
  }

  Atom parse_atom() {
    Token name = expect(Tok::Ident, "predicate name");
    Atom a;
    a.pred = name.text;
    if (peek().kind == Tok::LParen) {
      next();
      for (;;) {
        a.args.push_back(parse_term());
        if (peek().kind != Tok::Comma) break;
        next();
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  TermPtr parse_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        next();
        return Term::var(t.text);
      case Tok::Int:
        next();
        return Term::integer(t.value);
      case Tok::Minus: {
        next();
        Token n = expect(Tok::Int, "integer after '-'");
        return Term::integer(-n.value);
      }
      case Tok::Ident: {
        Token f = next();
        if (peek().kind != Tok::LParen)
          fail("constant '" + f.text + "' is not a supported term (only variables, integers, compounds)", f);
        next();
        std::vector<TermPtr> args;
        for (;;) {
          args.push_back(parse_term());
          if (peek().kind != Tok::Comma) break;
          next();
        }
        expect(Tok::RParen, "')'");
        return Term::compound(f.text, std::move(args));
      }
      default:
        fail("expected a term", t);
    }
  }

  void parse_literal(std::vector<Literal>& out) {
    const Token& t = peek();
    if (t.kind == Tok::Var && peek(1).kind == Tok::Ident && peek(1).text == "is") {
      Token v = next();
      next();  // is
      out.push_back(Literal::make_is(v.text, parse_expr(nullptr)));
      return;
    }
    if (t.kind == Tok::Ident) {
      out.push_back(Literal::make_call(parse_atom()));
      return;
    }
    ExprPtr lhs = parse_expr(nullptr);
    Token op = next();
    ExprPtr rhs = parse_expr(nullptr);
    switch (op.kind) {
      case Tok::Lt: out.push_back(Literal::make_compare(CmpOp::Lt, lhs, rhs)); break;
      case Tok::Gt: out.push_back(Literal::make_compare(CmpOp::Gt, lhs, rhs)); break;
      case Tok::Le: out.push_back(Literal::make_compare(CmpOp::Le, lhs, rhs)); break;
      case Tok::Ge: out.push_back(Literal::make_compare(CmpOp::Ge, lhs, rhs)); break;
      case Tok::Eq:
        // Surface equality desugars to the =< / >= pair.
        out.push_back(Literal::make_compare(CmpOp::Le, lhs, rhs));
        out.push_back(Literal::make_compare(CmpOp::Ge, lhs, rhs));
        break;
      default:
        fail("expected a comparison operator", op);
    }
  }

  // `scope`: non-null when parsing a condition, enabling $i atoms (named
  // variables stay available for variable-scoped conditions).
  ExprPtr parse_expr(const std::optional<PredRef>* scope) { return parse_addsub(scope); }

  ExprPtr parse_addsub(const std::optional<PredRef>* scope) {
    ExprPtr e = parse_muldiv(scope);
    for (;;) {
      if (peek().kind == Tok::Plus) {
        next();
        e = ArithExpr::binary(ArithExpr::Kind::Add, e, parse_muldiv(scope));
      } else if (peek().kind == Tok::Minus) {
        next();
        e = ArithExpr::binary(ArithExpr::Kind::Sub, e, parse_muldiv(scope));
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_muldiv(const std::optional<PredRef>* scope) {
    ExprPtr e = parse_unary(scope);
    for (;;) {
      if (peek().kind == Tok::Star) {
        next();
        e = ArithExpr::binary(ArithExpr::Kind::Mul, e, parse_unary(scope));
      } else if (peek().kind == Tok::Ident && peek().text == "div") {
        next();
        e = ArithExpr::binary(ArithExpr::Kind::Div, e, parse_unary(scope));
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary(const std::optional<PredRef>* scope) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Minus:
        next();
        return ArithExpr::negate(parse_unary(scope));
      case Tok::Int:
        next();
        return ArithExpr::integer(t.value);
      case Tok::Var:
        next();
        return ArithExpr::var_ref(t.text);
      case Tok::Denom: {
        if (scope == nullptr) fail("'$' positions are only valid in conditions", t);
        next();
        if (scope->has_value()) {
          int idx = static_cast<int>(t.value);
          if (idx < 1 || idx > (*scope)->arity)
            fail("position $" + t.value.str() + " out of range for " + (*scope)->key(), t);
        }
        // Encoded as a reserved variable name; the condition builder maps it.
        return ArithExpr::var_ref("$" + t.value.str());
      }
      case Tok::LParen: {
        next();
        ExprPtr e = parse_expr(scope);
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("expected an arithmetic operand", t);
    }
  }

  Cond parse_cond(const std::optional<PredRef>& scope) {
    Cond result = Cond::bottom();
    for (;;) {
      Conj c = parse_cond_conj(scope);
      if (!c.is_falsum()) result.disjuncts.push_back(std::move(c));
      if (peek().kind != Tok::Or) break;
      next();
    }
    if (result.disjuncts.empty()) return Cond::bottom();
    // Duplicate disjuncts collapse so parse(render(c)) is structurally c.
    std::vector<Conj> dedup;
    for (auto& d : result.disjuncts)
      if (std::find(dedup.begin(), dedup.end(), d) == dedup.end()) dedup.push_back(d);
    result.disjuncts = std::move(dedup);
    return result;
  }

  Conj parse_cond_conj(const std::optional<PredRef>& scope) {
    Conj c = Conj::top();
    for (;;) {
      parse_cond_atom(scope, c);
      if (peek().kind != Tok::And) break;
      next();
    }
    return c;
  }

  void parse_cond_atom(const std::optional<PredRef>& scope, Conj& c) {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "true") {
      next();
      return;
    }
    if (t.kind == Tok::Ident && t.text == "false") {
      next();
      c = Conj::falsum();
      return;
    }
    ExprPtr lhs = parse_expr(&scope);
    Token op = next();
    ExprPtr rhs = parse_expr(&scope);
    auto sym_of = [&](const std::string& name) {
      if (!name.empty() && name[0] == '$')
        return Sym::denom(scope ? scope->key() : "?", std::stoi(name.substr(1)));
      return Sym::var(name);
    };
    auto add = [&](CmpOp o) {
      try {
        c.add(normalize(o, *lhs, *rhs, sym_of));
      } catch (const InputError& e) {
        fail(e.what(), op);
      }
    };
    switch (op.kind) {
      case Tok::Lt: add(CmpOp::Lt); break;
      case Tok::Gt: add(CmpOp::Gt); break;
      case Tok::Le: add(CmpOp::Le); break;
      case Tok::Ge: add(CmpOp::Ge); break;
      case Tok::Eq:
        add(CmpOp::Le);
        add(CmpOp::Ge);
        break;
      default:
        fail("expected a comparison operator", op);
    }
  }

  void check_arities(const Program& prog) {
    std::map<std::string, std::pair<int, int>> seen;  // name -> (arity, line)
    auto note = [&](const std::string& name, int arity, int line) {
      auto [it, fresh] = seen.emplace(name, std::make_pair(arity, line));
      if (!fresh && it->second.first != arity)
        throw InputError("predicate " + name + " used with arities " +
                             std::to_string(it->second.first) + " and " +
                             std::to_string(arity),
                         line, 0);
    };
    for (const auto& cl : prog.clauses) {
      note(cl.head.pred, static_cast<int>(cl.head.args.size()), 0);
      for (const auto& lit : cl.body)
        if (lit.kind == Literal::Kind::Call)
          note(lit.call.pred, static_cast<int>(lit.call.args.size()), 0);
    }
  }

  void check_directives(const Program& prog) {
    std::set<std::string> known;
    for (const auto& cl : prog.clauses) {
      known.insert(PredRef{cl.head.pred, static_cast<int>(cl.head.args.size())}.key());
      for (const auto& lit : cl.body)
        if (lit.kind == Literal::Kind::Call)
          known.insert(PredRef{lit.call.pred, static_cast<int>(lit.call.args.size())}.key());
    }
    for (const auto& d : prog.directives)
      if (!known.count(d.pred.key()))
        throw InputError("directive refers to unknown predicate " + d.pred.key(), d.line, 0);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).parse_program(); }

Cond parse_condition(const std::string& text, const PredRef& pred) {
  return Parser(text).parse_condition_entry(pred);
}

Cond parse_var_condition(const std::string& text) {
  return Parser(text).parse_condition_entry(std::nullopt);
}

}  // namespace numloop
