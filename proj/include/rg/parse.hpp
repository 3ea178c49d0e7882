#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rg/game.hpp"
#include "rg/lex.hpp"

namespace rg {

struct ParseResult {
  Game game;
  Diagnostics diagnostics;

  [[nodiscard]] bool ok() const { return count_errors(diagnostics) == 0; }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  ParseResult run() {
    while (!at(Tok::Eof)) {
      size_t before = pos_;
      statement();
      if (pos_ == before) next();  // always make progress, even on bad input
    }
    return ParseResult{std::move(game_), std::move(diags_)};
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  Game game_;
  Diagnostics diags_;
  bool statement_failed_ = false;

  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  bool at(Tok t) const { return peek().kind == t; }
  bool at_name(std::string_view s) const { return at(Tok::Name) && peek().text == s; }

  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(Tok t) {
    if (!at(t)) return false;
    next();
    return true;
  }

  void error(std::string code, std::string message, Span span) {
    if (statement_failed_) return;  // one diagnostic per statement
    statement_failed_ = true;
    add_error(diags_, std::move(code), std::move(message), span);
  }

  void error_here(std::string code, std::string message) {
    error(std::move(code), std::move(message), peek().span);
  }

  // Skips to just past the next ';' (statement recovery point).
  void recover() {
    while (!at(Tok::Eof) && !at(Tok::Semi)) next();
    accept(Tok::Semi);
  }

  bool expect(Tok t, const char* what) {
    if (accept(t)) return true;
    if (at(Tok::Eof))
      error_here("UnterminatedStatement", std::string("expected ") + what + " before end of input");
    else
      error_here("UnexpectedToken", std::string("expected ") + what);
    return false;
  }

  // A name usable in the model: any identifier that is not a keyword.
  std::pair<NameId, Span> parse_name(const char* what) {
    if (!at(Tok::Name)) {
      expect(Tok::Name, what);
      return {NameId{}, peek().span};
    }
    const Token& t = next();
    if (is_reserved_keyword(t.text)) {
      error("ReservedKeyword", "'" + std::string(t.text) + "' is a reserved keyword", t.span);
      return {NameId{}, t.span};
    }
    return {game_.names.intern(t.text), t.span};
  }

  // Declared names additionally must not start with a digit.
  std::pair<NameId, Span> parse_decl_name(const char* what) {
    auto [id, span] = parse_name(what);
    if (id.valid() && !is_declarable_name(game_.names.text(id))) {
      error("UnexpectedToken", "declaration name must not start with a digit", span);
      return {NameId{}, span};
    }
    return {id, span};
  }

  void statement() {
    statement_failed_ = false;
    if (at_name("type") || at_name("const") || at_name("var")) {
      declaration();
    } else if (at(Tok::At)) {
      pragma();
    } else if (at(Tok::Name)) {
      edge();
    } else {
      error_here("UnexpectedToken", "expected a declaration, an edge, or a pragma");
      recover();
    }
  }

  void check_duplicate(NameId n, Span span) {
    if (n.valid() && game_.declared(n))
      error("DuplicateDefinition", "'" + game_.text(n) + "' is already defined", span);
  }

  void declaration() {
    const Token& kw = next();
    if (kw.text == "type") {
      auto [name, span] = parse_decl_name("type name");
      if (!expect(Tok::Assign, "'='")) return recover();
      TypeExpr t = parse_type();
      if (!expect(Tok::Semi, "';'")) return recover();
      if (statement_failed_) return;
      check_duplicate(name, span);
      if (!statement_failed_) game_.aliases.push_back(AliasDecl{name, std::move(t), span});
      return;
    }
    const bool is_const = kw.text == "const";
    auto [name, span] = parse_decl_name(is_const ? "constant name" : "variable name");
    if (!expect(Tok::Colon, "':'")) return recover();
    TypeExpr t = parse_type();
    if (!expect(Tok::Assign, "'='")) return recover();
    Value v = parse_value();
    if (!expect(Tok::Semi, "';'")) return recover();
    if (statement_failed_) return;
    check_duplicate(name, span);
    if (statement_failed_) return;
    if (is_const)
      game_.consts.push_back(ConstDecl{name, std::move(t), std::move(v), span});
    else
      game_.vars.push_back(VarDecl{name, std::move(t), std::move(v), span});
  }

  TypeExpr parse_type() {
    TypeExpr atom = parse_type_atom();
    if (accept(Tok::Arrow)) return TypeExpr::arrow(std::move(atom), parse_type());  // right-assoc
    return atom;
  }

  TypeExpr parse_type_atom() {
    if (accept(Tok::LBrace)) {
      std::vector<NameId> syms;
      do {
        auto [s, span] = parse_name("symbol");
        if (!s.valid()) break;
        for (NameId prev : syms)
          if (prev == s) error("DuplicateDefinition", "duplicate symbol in set type", span);
        syms.push_back(s);
      } while (accept(Tok::Comma));
      expect(Tok::RBrace, "'}'");
      return TypeExpr::set(std::move(syms));
    }
    auto [n, span] = parse_name("type");
    (void)span;
    return TypeExpr::alias_ref(n);
  }

  Value parse_value() {
    if (accept(Tok::LBrace)) {
      if (!expect(Tok::Colon, "':' (maps start with their default value)"))
        return Value::symbol(NameId{});
      Value def = parse_value();
      std::vector<MapEntry> entries;
      while (accept(Tok::Comma)) {
        auto [k, kspan] = parse_name("map key");
        (void)kspan;
        if (!expect(Tok::Colon, "':'")) break;
        entries.emplace_back(k, parse_value());
      }
      expect(Tok::RBrace, "'}'");
      return make_map(std::move(def), std::move(entries));
    }
    auto [n, span] = parse_name("value");
    (void)span;
    return Value::symbol(n);
  }

  Expr parse_expr() {
    Expr e = parse_primary();
    while (at(Tok::LBracket)) {
      Span s = next().span;
      Expr key = parse_expr();
      expect(Tok::RBracket, "']'");
      e = Expr::access(std::move(e), std::move(key), s);
    }
    return e;
  }

  Expr parse_primary() {
    auto [n, span] = parse_name("expression");
    if (at(Tok::LParen)) {
      next();
      Expr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return Expr::cast(n, std::move(inner), span);
    }
    return Expr::ref(n, span);
  }

  void edge() {
    Span espan = peek().span;
    auto [from, fs] = parse_name("node");
    (void)fs;
    if (!expect(Tok::Comma, "','")) return recover();
    auto [to, ts] = parse_name("node");
    (void)ts;
    if (!expect(Tok::Colon, "':'")) return recover();
    Action a = parse_action();
    if (!expect(Tok::Semi, "';'")) return recover();
    if (statement_failed_) return;
    game_.edges.push_back(Edge{from, to, std::move(a), espan});
  }

  Action parse_action() {
    Span aspan = peek().span;
    if (at(Tok::Semi)) return Action::empty(aspan);  // omitted action
    if (at(Tok::Question) || at(Tok::Bang)) {
      bool positive = next().kind == Tok::Question;
      auto [from, fs] = parse_name("node");
      (void)fs;
      expect(Tok::Arrow, "'->'");
      auto [to, ts] = parse_name("node");
      (void)ts;
      return Action::reach(from, to, positive, aspan);
    }
    if (at(Tok::Dollar)) {
      next();
      auto [t, ts] = parse_name("tag");
      (void)ts;
      return Action::tag_action(t, aspan);
    }
    if (at(Tok::DollarDollar)) {
      next();
      auto [v, vs] = parse_name("variable");
      (void)vs;
      return Action::var_tag(v, aspan);
    }
    Expr lhs = parse_expr();
    if (accept(Tok::EqEq)) return Action::compare(std::move(lhs), parse_expr(), true, aspan);
    if (accept(Tok::NotEq)) return Action::compare(std::move(lhs), parse_expr(), false, aspan);
    if (accept(Tok::Assign)) {
      // `lhs = T(*)` is the any-assignment shorthand.
      if (at(Tok::Name) && peek(1).kind == Tok::LParen && peek(2).kind == Tok::Star) {
        auto [dom, ds] = parse_name("type");
        (void)ds;
        next();  // (
        next();  // *
        expect(Tok::RParen, "')'");
        return Action::any_assign(std::move(lhs), dom, aspan);
      }
      return Action::assign(std::move(lhs), parse_expr(), aspan);
    }
    error_here("UnexpectedToken", "expected '==', '!=' or '=' after expression");
    return Action::empty(aspan);
  }

  void pragma() {
    Span pspan = next().span;  // @
    auto [name, ns] = parse_name("pragma name");
    (void)ns;
    std::vector<std::string> toks;
    while (!at(Tok::Semi) && !at(Tok::Eof)) toks.emplace_back(next().text);
    if (!expect(Tok::Semi, "';'")) return;
    if (statement_failed_) return;
    game_.pragmas.push_back(Pragma{name, std::move(toks), pspan});
  }
};

}  // namespace detail

// Parses a `.rg` description. Never throws on malformed input: every failure
// is reported as a diagnostic and parsing resumes at the next ';'.
inline ParseResult parse_game(std::string_view source) {
  return detail::Parser(source).run();
}

}  // namespace rg
