#pragma once

// Surface syntax: lexer, module and command parsing, term parsing, printing.
//
// Statement bodies are kept as token slices until their module is complete,
// then parsed against the flattened signature; an equation may therefore use
// operators declared after it. The term grammar, loosest binding first:
// implies (right assoc), or, xor, and, not, =, {<= < in}, + -, unary -,
// juxtaposition, application/parens. Binary a - b is sugar for a + (- b).

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "term.hpp"

namespace osr {

struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& msg, int ln)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

enum class Tok { Word, LPar, RPar, LBrace, RBrace, LBrack, RBrack, Comma, Expect };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0, n = src.size();
  auto special = [](char c) {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',';
  };
  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      std::size_t j = i + 2;
      while (j < n && src[j] != '\n') ++j;
      std::string body = src.substr(i + 2, j - i - 2);
      std::size_t b = body.find_first_not_of(" \t");
      if (b != std::string::npos && body.compare(b, 7, "expect:") == 0) {
        std::string text = body.substr(b + 7);
        std::size_t s = text.find_first_not_of(" \t");
        std::size_t e = text.find_last_not_of(" \t\r");
        out.push_back({Tok::Expect,
                       s == std::string::npos ? std::string() : text.substr(s, e - s + 1), line});
      }
      i = j;
      continue;
    }
    if (special(c)) {
      Tok k = c == '(' ? Tok::LPar
              : c == ')' ? Tok::RPar
              : c == '{' ? Tok::LBrace
              : c == '}' ? Tok::RBrace
              : c == '[' ? Tok::LBrack
              : c == ']' ? Tok::RBrack
                         : Tok::Comma;
      out.push_back({k, std::string(1, c), line});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !std::isspace((unsigned char)src[j]) && !special(src[j])) ++j;
    out.push_back({Tok::Word, src.substr(i, j - i), line});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Script AST

struct SortDeclAst {
  bool hidden = false;
  std::vector<std::string> names;                            // every sort mentioned
  std::vector<std::pair<std::string, std::string>> subsorts; // (lower, upper) pairs
};

struct OpDeclAst {
  std::vector<std::string> names;
  std::vector<std::string> arity;
  std::string coarity;
  OpAttrs attrs;
  bool behavioral = false;
  int line = 0;
};

struct VarDeclAst {
  std::vector<std::string> names;
  std::string sort;
};

struct EqDeclAst {
  bool conditional = false;
  std::vector<Token> lhs, rhs, cond;
  int line = 0;
};

struct ImportAst {
  std::string target;
};

using ModuleItem = std::variant<SortDeclAst, OpDeclAst, VarDeclAst, EqDeclAst, ImportAst>;

enum class Denotation { Tight, Loose, Plain };

struct ModuleAst {
  std::string name;
  Denotation denotation = Denotation::Plain;
  std::vector<ModuleItem> items;
};

struct RedCmd {
  std::string in_module;  // empty: current open block or most recent module
  std::vector<Token> tokens;
  std::optional<std::string> expect;
  int line = 0;
};

using OpenItem = std::variant<OpDeclAst, VarDeclAst, EqDeclAst, RedCmd>;

struct OpenBlock {
  std::string base;
  std::vector<OpenItem> items;
  int line = 0;
};

using ScriptItem = std::variant<ModuleAst, OpenBlock, RedCmd>;

struct Script {
  std::vector<ScriptItem> items;
};

// ---------------------------------------------------------------------------
// Statement parsing

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Script parse_script() {
    Script s;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == Tok::Expect) {
        ++pos_;
        continue;
      }
      if (t.kind != Tok::Word) throw ParseError("unexpected token '" + t.text + "'", t.line);
      if (t.text == "mod!" || t.text == "mod*" || t.text == "mod")
        s.items.push_back(parse_module());
      else if (t.text == "open")
        s.items.push_back(parse_open());
      else if (t.text == "red" || t.text == "reduce")
        s.items.push_back(parse_red());
      else
        throw ParseError("unexpected top-level token '" + t.text + "'", t.line);
    }
    return s;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    if (at_end()) throw ParseError("unexpected end of input", toks_.empty() ? 0 : toks_.back().line);
    return toks_[pos_];
  }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }
  bool peek_word(const std::string& w) const {
    return !at_end() && toks_[pos_].kind == Tok::Word && toks_[pos_].text == w;
  }
  Token expect_kind(Tok k, const std::string& what) {
    const Token& t = peek();
    if (t.kind != k) throw ParseError("expected " + what + ", got '" + t.text + "'", t.line);
    return next();
  }
  Token expect_word(const std::string& w) {
    const Token& t = peek();
    if (t.kind != Tok::Word || t.text != w)
      throw ParseError("expected '" + w + "', got '" + t.text + "'", t.line);
    return next();
  }
  void expect_dot() { expect_word("."); }

  // Collect tokens until a paren-depth-0 stop word; the stop is not consumed.
  std::vector<Token> collect_until(const std::set<std::string>& stops) {
    std::vector<Token> out;
    int depth = 0;
    while (true) {
      const Token& t = peek();
      if (depth == 0 && t.kind == Tok::Word && stops.count(t.text)) return out;
      if (t.kind == Tok::LPar) ++depth;
      if (t.kind == Tok::RPar) {
        if (depth == 0) throw ParseError("unbalanced ')'", t.line);
        --depth;
      }
      if (t.kind == Tok::RBrace || t.kind == Tok::Expect)
        throw ParseError("statement not terminated with '.'", t.line);
      out.push_back(next());
    }
  }

  static bool import_word(const std::string& w) {
    return w == "pr" || w == "protecting" || w == "ex" || w == "extending" || w == "us" ||
           w == "using" || w == "inc" || w == "including";
  }

  // Words that begin a new statement; they delimit declarations whose trailing
  // '.' is omitted (the corpus mixes both styles).
  static bool statement_word(const std::string& w) {
    static const std::set<std::string> kw = {"op",  "ops", "bop",  "bops", "pred",   "preds",
                                             "var", "vars", "eq",  "beq",  "ceq",    "cq",
                                             "bceq", "red", "reduce", "close", "open", "*"};
    return kw.count(w) > 0 || import_word(w);
  }

  ModuleAst parse_module() {
    Token kw = next();
    ModuleAst m;
    m.denotation = kw.text == "mod!"   ? Denotation::Tight
                   : kw.text == "mod*" ? Denotation::Loose
                                       : Denotation::Plain;
    m.name = expect_kind(Tok::Word, "module name").text;
    expect_kind(Tok::LBrace, "'{'");
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::RBrace) {
        next();
        break;
      }
      if (t.kind == Tok::Expect) {
        next();
        continue;
      }
      if (t.kind == Tok::LBrack) {
        m.items.push_back(parse_sorts(false));
        continue;
      }
      if (t.kind == Tok::Word && t.text == "*") {
        next();
        expect_kind(Tok::LBrack, "'[' after '*'");
        SortDeclAst sd = parse_sorts_body(true);
        expect_word("*");
        m.items.push_back(std::move(sd));
        continue;
      }
      if (t.kind != Tok::Word) throw ParseError("unexpected token '" + t.text + "'", t.line);
      if (t.text == "op" || t.text == "ops" || t.text == "bop" || t.text == "bops" ||
          t.text == "pred" || t.text == "preds")
        m.items.push_back(parse_op());
      else if (t.text == "var" || t.text == "vars")
        m.items.push_back(parse_var());
      else if (t.text == "eq" || t.text == "beq" || t.text == "ceq" || t.text == "cq" ||
               t.text == "bceq")
        m.items.push_back(parse_eq());
      else if (import_word(t.text))
        for (auto& im : parse_import()) m.items.push_back(std::move(im));
      else
        throw ParseError("unexpected token '" + t.text + "' in module body", t.line);
    }
    return m;
  }

  SortDeclAst parse_sorts(bool hidden) {
    expect_kind(Tok::LBrack, "'['");
    return parse_sorts_body(hidden);
  }

  // After '[': chains of name groups separated by '<', chains separated by ','.
  SortDeclAst parse_sorts_body(bool hidden) {
    SortDeclAst sd;
    sd.hidden = hidden;
    std::vector<std::vector<std::string>> chain(1);
    auto flush_chain = [&](int line) {
      for (auto& g : chain)
        if (g.empty()) throw ParseError("empty sort group", line);
      for (auto& g : chain)
        for (auto& s : g) sd.names.push_back(s);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        for (auto& lo : chain[i])
          for (auto& hi : chain[i + 1]) sd.subsorts.push_back({lo, hi});
      chain.assign(1, {});
    };
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::RBrack) {
        flush_chain(t.line);
        next();
        return sd;
      }
      if (t.kind == Tok::Comma) {
        flush_chain(t.line);
        next();
        continue;
      }
      if (t.kind == Tok::Word && t.text == "<") {
        next();
        chain.push_back({});
        continue;
      }
      if (t.kind != Tok::Word) throw ParseError("unexpected token '" + t.text + "' in sorts", t.line);
      chain.back().push_back(next().text);
    }
  }

  OpDeclAst parse_op() {
    Token kw = next();
    OpDeclAst od;
    od.line = kw.line;
    od.behavioral = kw.text == "bop" || kw.text == "bops";
    bool plural = kw.text == "ops" || kw.text == "bops" || kw.text == "preds";
    bool pred = kw.text == "pred" || kw.text == "preds";
    std::vector<std::string> name_toks;
    while (!peek_word(":")) {
      const Token& t = peek();
      if (t.kind != Tok::Word)
        throw ParseError("unexpected token '" + t.text + "' in operator name", t.line);
      name_toks.push_back(next().text);
    }
    if (name_toks.empty()) throw ParseError("missing operator name", kw.line);
    expect_word(":");
    if (plural) {
      od.names = name_toks;
    } else {
      std::string joined = name_toks[0];
      for (std::size_t i = 1; i < name_toks.size(); ++i) joined += " " + name_toks[i];
      od.names.push_back(joined);
    }
    if (pred) {
      // pred f : A B is sugar for op f : A B -> Bool; the arity runs to the
      // attribute brace, the dot, or the next statement
      od.coarity = "Bool";
      while (!at_end() && peek().kind == Tok::Word && peek().text != "." &&
             !statement_word(peek().text))
        od.arity.push_back(next().text);
    } else {
      while (!peek_word("->")) od.arity.push_back(expect_kind(Tok::Word, "argument sort").text);
      expect_word("->");
      od.coarity = expect_kind(Tok::Word, "result sort").text;
    }
    if (!at_end() && peek().kind == Tok::LBrace) {
      next();
      while (peek().kind != Tok::RBrace) {
        std::string a = expect_kind(Tok::Word, "operator attribute").text;
        if (a == "assoc")
          od.attrs.assoc = true;
        else if (a == "comm")
          od.attrs.comm = true;
        else if (a == "idem")
          od.attrs.idem = true;
        else if (a == "memo")
          od.attrs.memo = true;
        // other attributes (constr, prec annotations) carry no meaning here
      }
      next();
    }
    if (peek_word(".")) next();
    return od;
  }

  VarDeclAst parse_var() {
    next();
    VarDeclAst vd;
    while (!peek_word(":")) vd.names.push_back(expect_kind(Tok::Word, "variable name").text);
    if (vd.names.empty()) throw ParseError("missing variable name", peek().line);
    expect_word(":");
    vd.sort = expect_kind(Tok::Word, "variable sort").text;
    if (peek_word(".")) next();
    return vd;
  }

  EqDeclAst parse_eq() {
    Token kw = next();
    EqDeclAst eq;
    eq.line = kw.line;
    eq.conditional = kw.text == "ceq" || kw.text == "cq" || kw.text == "bceq";
    eq.lhs = collect_until({"="});
    expect_word("=");
    if (eq.conditional) {
      eq.rhs = collect_until({"if"});
      expect_word("if");
      eq.cond = collect_until({"."});
    } else {
      eq.rhs = collect_until({"."});
    }
    expect_dot();
    if (eq.lhs.empty() || eq.rhs.empty() || (eq.conditional && eq.cond.empty()))
      throw ParseError("incomplete equation", kw.line);
    return eq;
  }

  // pr(A + B) imports both A and B
  std::vector<ImportAst> parse_import() {
    next();
    expect_kind(Tok::LPar, "'('");
    std::vector<ImportAst> out;
    out.push_back({expect_kind(Tok::Word, "module name").text});
    while (peek_word("+")) {
      next();
      out.push_back({expect_kind(Tok::Word, "module name").text});
    }
    expect_kind(Tok::RPar, "')'");
    if (peek_word(".")) next();
    return out;
  }

  OpenBlock parse_open() {
    Token kw = next();
    OpenBlock ob;
    ob.line = kw.line;
    ob.base = expect_kind(Tok::Word, "module name").text;
    if (peek_word(".")) next();
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::Expect) {
        next();
        continue;
      }
      if (t.kind != Tok::Word) throw ParseError("unexpected token '" + t.text + "' in open", t.line);
      if (t.text == "close") {
        next();
        if (!at_end() && peek_word(".")) next();
        return ob;
      }
      if (t.text == "op" || t.text == "ops" || t.text == "pred" || t.text == "preds")
        ob.items.push_back(parse_op());
      else if (t.text == "var" || t.text == "vars")
        ob.items.push_back(parse_var());
      else if (t.text == "eq" || t.text == "ceq" || t.text == "cq")
        ob.items.push_back(parse_eq());
      else if (t.text == "red" || t.text == "reduce")
        ob.items.push_back(parse_red());
      else
        throw ParseError("unexpected token '" + t.text + "' in open block", t.line);
    }
  }

  RedCmd parse_red() {
    Token kw = next();
    RedCmd rc;
    rc.line = kw.line;
    if (peek_word("in")) {
      next();
      rc.in_module = expect_kind(Tok::Word, "module name").text;
      expect_word(":");
    }
    rc.tokens = collect_until({"."});
    expect_dot();
    if (rc.tokens.empty()) throw ParseError("empty reduction", kw.line);
    if (!at_end() && peek().kind == Tok::Expect) rc.expect = next().text;
    return rc;
  }
};

// ---------------------------------------------------------------------------
// Term parsing against a flattened signature

class TermParser {
public:
  TermParser(const FlatModule& m, std::map<std::string, std::string> vars)
      : m_(m), vars_(std::move(vars)) {}

  TermPtr parse(const std::vector<Token>& toks) {
    toks_ = &toks;
    pos_ = 0;
    TermPtr t = parse_level(0);
    if (pos_ != toks.size())
      throw ParseError("unexpected trailing token '" + toks[pos_].text + "'", toks[pos_].line);
    return ac_flatten(t, m_);
  }

  // inline annotations (X:Rat) accumulate here; later sides of an equation see them
  const std::map<std::string, std::string>& vars() const { return vars_; }

private:
  const FlatModule& m_;
  std::map<std::string, std::string> vars_;
  const std::vector<Token>* toks_ = nullptr;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= toks_->size(); }
  const Token& peek() const {
    if (at_end())
      throw ParseError("unexpected end of term", toks_->empty() ? 0 : toks_->back().line);
    return (*toks_)[pos_];
  }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }
  bool peek_word(const std::string& w) const {
    return !at_end() && (*toks_)[pos_].kind == Tok::Word && (*toks_)[pos_].text == w;
  }
  void expect_word(const std::string& w) {
    const Token& t = peek();
    if (t.kind != Tok::Word || t.text != w)
      throw ParseError("expected '" + w + "', got '" + t.text + "'", t.line);
    ++pos_;
  }

  static bool is_rational(const std::string& w) {
    Rational r;
    return Rational::parse(w, r);
  }

  bool op_exists(const std::string& w) const {
    for (const auto& kv : m_.ops)
      if (kv.first.first == w) return true;
    return w == "_=_" || w == "if_then_else_fi";
  }

  TermPtr parse_level(int lvl) {
    switch (lvl) {
      case 0: {  // implies, right associative
        TermPtr t = parse_level(1);
        if (peek_word("implies")) {
          next();
          return Term::app("_implies_", {t, parse_level(0)});
        }
        return t;
      }
      case 1:
        return parse_flat("or", "_or_", 2);
      case 2:
        return parse_flat("xor", "_xor_", 3);
      case 3:
        return parse_flat("and", "_and_", 4);
      case 4: {  // not, prefix
        if (peek_word("not")) {
          next();
          return Term::app("not_", {parse_level(4)});
        }
        return parse_level(5);
      }
      case 5: {  // =, non-associative
        TermPtr t = parse_level(6);
        if (peek_word("=")) {
          next();
          return Term::app("_=_", {t, parse_level(6)});
        }
        return t;
      }
      case 6: {  // comparisons and membership, non-associative
        TermPtr t = parse_level(7);
        if (peek_word("<=")) {
          next();
          return Term::app("_<=_", {t, parse_level(7)});
        }
        if (peek_word("<")) {
          next();
          return Term::app("_<_", {t, parse_level(7)});
        }
        if (peek_word("in")) {
          next();
          return Term::app("_in_", {t, parse_level(7)});
        }
        return t;
      }
      case 7: {  // + and -, left associative; a - b desugars to a + (- b)
        TermPtr t = parse_level(8);
        while (!at_end() && (peek_word("+") || peek_word("-"))) {
          bool minus = next().text == "-";
          TermPtr rhs = parse_level(8);
          if (minus) rhs = Term::app("-_", {rhs});
          t = Term::app("_+_", {t, rhs});
        }
        return t;
      }
      case 8: {  // unary minus
        if (peek_word("-")) {
          next();
          return Term::app("-_", {parse_level(8)});
        }
        return parse_level(9);
      }
      default: {  // juxtaposition over primaries
        TermPtr t = parse_primary();
        if (!starts_primary()) return t;
        std::vector<TermPtr> parts{t};
        while (starts_primary()) parts.push_back(parse_primary());
        return Term::app("_ _", std::move(parts));
      }
    }
  }

  TermPtr parse_flat(const std::string& word, const std::string& op, int sub) {
    TermPtr t = parse_level(sub);
    if (!peek_word(word)) return t;
    std::vector<TermPtr> args{t};
    while (peek_word(word)) {
      next();
      args.push_back(parse_level(sub));
    }
    return Term::app(op, std::move(args));
  }

  bool starts_primary() const {
    if (at_end()) return false;
    const Token& t = (*toks_)[pos_];
    if (t.kind == Tok::LPar) return true;
    if (t.kind != Tok::Word) return false;
    static const std::set<std::string> stop = {".",   ",",    "then", "else",    "fi",  "if",
                                              "=",   "+",    "-",    "<=",      "<",   "in",
                                              "and", "or",   "xor",  "implies", "not", "close"};
    if (stop.count(t.text)) return false;
    if (is_rational(t.text) || t.text == "true" || t.text == "false") return true;
    if (t.text.find(':') != std::string::npos) return true;
    if (vars_.count(t.text)) return true;
    return op_exists(t.text);
  }

  TermPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::LPar) {
      next();
      TermPtr inner = parse_level(0);
      if (peek().kind != Tok::RPar) throw ParseError("expected ')'", peek().line);
      next();
      return inner;
    }
    if (t.kind != Tok::Word) throw ParseError("unexpected token '" + t.text + "'", t.line);
    if (t.text == "if") {
      next();
      TermPtr c = parse_level(0);
      expect_word("then");
      TermPtr a = parse_level(0);
      expect_word("else");
      TermPtr b = parse_level(0);
      expect_word("fi");
      return Term::app("if_then_else_fi", {c, a, b});
    }
    Rational r;
    if (Rational::parse(t.text, r)) {
      next();
      return Term::rat_lit(r);
    }
    if (t.text == "true" || t.text == "false") {
      next();
      return Term::bool_lit(t.text == "true");
    }
    std::size_t colon = t.text.find(':');
    if (colon != std::string::npos && colon > 0 && colon + 1 < t.text.size()) {
      std::string name = t.text.substr(0, colon), sort = t.text.substr(colon + 1);
      if (!m_.sorts.count(sort)) throw ParseError("unknown sort '" + sort + "'", t.line);
      auto it = vars_.find(name);
      if (it != vars_.end() && it->second != sort)
        throw ParseError("variable '" + name + "' redeclared with sort '" + sort + "'", t.line);
      vars_[name] = sort;
      next();
      return Term::var(name, sort);
    }
    auto vit = vars_.find(t.text);
    if (vit != vars_.end()) {
      next();
      return Term::var(vit->first, vit->second);
    }
    if (op_exists(t.text)) {
      std::string name = next().text;
      if (!at_end() && peek().kind == Tok::LPar && !m_.ops.count({name, 0})) {
        std::vector<TermPtr> args = parse_args();
        if (!m_.find_op(name, (int)args.size()) && name != "_=_" && name != "if_then_else_fi")
          throw ParseError("operator '" + name + "' takes no " + std::to_string(args.size()) +
                               " arguments",
                           t.line);
        return Term::app(name, std::move(args));
      }
      if (m_.ops.count({name, 0})) return Term::app(name);
      std::vector<TermPtr> args = parse_args();
      return Term::app(name, std::move(args));
    }
    throw ParseError("unknown identifier '" + t.text + "'", t.line);
  }

  std::vector<TermPtr> parse_args() {
    if (at_end() || peek().kind != Tok::LPar)
      throw ParseError("expected '(' with operator arguments", at_end() ? 0 : peek().line);
    next();
    std::vector<TermPtr> args;
    args.push_back(parse_level(0));
    while (peek().kind == Tok::Comma) {
      next();
      args.push_back(parse_level(0));
    }
    if (peek().kind != Tok::RPar) throw ParseError("expected ')'", peek().line);
    next();
    return args;
  }
};

inline TermPtr parse_term(const std::string& text, const FlatModule& m,
                          std::map<std::string, std::string> vars = {}) {
  TermParser tp(m, std::move(vars));
  TermPtr t = tp.parse(lex(text));
  least_sort(t, m);  // validates arities and argument sorts
  return t;
}

// ---------------------------------------------------------------------------
// Printing, inverse of the term grammar up to redundant parentheses

namespace detail {
struct InfixInfo {
  const char* sym;
  int prec;
};
inline const std::map<std::string, InfixInfo>& infix_table() {
  static const std::map<std::string, InfixInfo> t = {
      {"_implies_", {"implies", 0}}, {"_or_", {"or", 1}}, {"_xor_", {"xor", 2}},
      {"_and_", {"and", 3}},         {"_=_", {"=", 5}},   {"_<=_", {"<=", 6}},
      {"_<_", {"<", 6}},             {"_in_", {"in", 6}}, {"_+_", {"+", 7}},
      {"_ _", {"", 9}},
  };
  return t;
}
}  // namespace detail

inline std::string print_term(const TermPtr& t, int parent_prec = 0) {
  auto wrap = [&](int prec, const std::string& s) {
    return prec < parent_prec ? "(" + s + ")" : s;
  };
  switch (t->kind) {
    case Term::Kind::Rat:
      return t->rat.str();
    case Term::Kind::Bool:
      return t->b ? "true" : "false";
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::App:
      break;
  }
  if (t->name == "not_" && t->args.size() == 1)
    return wrap(4, "not " + print_term(t->args[0], 5));
  if (t->name == "-_" && t->args.size() == 1) return wrap(8, "- " + print_term(t->args[0], 8));
  if (t->name == "if_then_else_fi" && t->args.size() == 3)
    return "if " + print_term(t->args[0], 0) + " then " + print_term(t->args[1], 0) + " else " +
           print_term(t->args[2], 0) + " fi";
  auto it = detail::infix_table().find(t->name);
  if (it != detail::infix_table().end() && t->args.size() >= 2) {
    int p = it->second.prec;
    std::string sep = *it->second.sym ? " " + std::string(it->second.sym) + " " : " ";
    std::string s;
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) s += sep;
      s += print_term(t->args[i], p + 1);
    }
    return wrap(p, s);
  }
  if (t->args.empty()) return t->name;
  std::string s = t->name + "(";
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (i) s += ", ";
    s += print_term(t->args[i], 0);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Module registry: flattening with import resolution

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string dir_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

inline std::string lowercase(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

class ModuleRegistry {
public:
  std::vector<std::string> search_dirs;

  void register_script(const Script& s, const std::string& source_dir) {
    for (const auto& item : s.items)
      if (const ModuleAst* m = std::get_if<ModuleAst>(&item)) {
        asts_[m->name] = *m;
        origin_dir_[m->name] = source_dir;
        flats_.erase(m->name);
      }
  }

  // Parses the file and registers its modules; commands are returned for the
  // caller to run, so files pulled in purely for imports stay side-effect free.
  Script load_file(const std::string& path) {
    Parser p(lex(read_file(path)));
    Script s = p.parse_script();
    register_script(s, dir_of(path));
    return s;
  }

  bool known(const std::string& name) const { return asts_.count(name) > 0; }

  static bool builtin_module(const std::string& name) {
    return name == "BOOL" || name == "TRUTH" || name == "NAT" || name == "RAT" || name == "INT";
  }

  const FlatModule& flat(const std::string& name) {
    auto it = flats_.find(name);
    if (it != flats_.end()) return it->second;
    FlatModule m;
    m.name = name;
    add_builtin_signature(m);
    std::set<std::string> done;
    flatten_into(m, name, "", done);
    return flats_.emplace(name, std::move(m)).first->second;
  }

private:
  std::map<std::string, ModuleAst> asts_;
  std::map<std::string, std::string> origin_dir_;
  std::map<std::string, FlatModule> flats_;

  void ensure_ast(const std::string& name, const std::string& from_dir) {
    if (asts_.count(name)) return;
    std::vector<std::string> dirs;
    if (!from_dir.empty()) dirs.push_back(from_dir);
    dirs.insert(dirs.end(), search_dirs.begin(), search_dirs.end());
    for (const auto& d : dirs) {
      std::string path = d + "/" + lowercase(name) + ".cafe";
      std::ifstream probe(path);
      if (!probe) continue;
      load_file(path);
      if (asts_.count(name)) return;
    }
    throw std::runtime_error("unknown module " + name);
  }

  void flatten_into(FlatModule& out, const std::string& name, const std::string& from_dir,
                    std::set<std::string>& done) {
    if (done.count(name) || builtin_module(name)) return;
    done.insert(name);
    ensure_ast(name, from_dir);
    const ModuleAst& ast = asts_.at(name);
    const std::string& own_dir = origin_dir_.at(name);

    for (const auto& item : ast.items)
      if (const ImportAst* im = std::get_if<ImportAst>(&item))
        flatten_into(out, im->target, own_dir, done);

    bool tight = ast.denotation == Denotation::Tight;
    std::map<std::string, std::string> vars;
    for (const auto& item : ast.items) {
      if (const SortDeclAst* sd = std::get_if<SortDeclAst>(&item)) {
        for (const auto& s : sd->names) out.add_sort(s, sd->hidden, tight);
        for (const auto& p : sd->subsorts) out.add_subsort(p.first, p.second);
      } else if (const OpDeclAst* od = std::get_if<OpDeclAst>(&item)) {
        for (const auto& n : od->names) {
          for (const auto& s : od->arity)
            if (!out.sorts.count(s)) throw ParseError("unknown sort '" + s + "'", od->line);
          if (!out.sorts.count(od->coarity))
            throw ParseError("unknown sort '" + od->coarity + "'", od->line);
          out.add_op(Operator{n, od->arity, od->coarity, od->attrs, od->behavioral, false,
                              tight && od->arity.empty()});
        }
      } else if (const VarDeclAst* vd = std::get_if<VarDeclAst>(&item)) {
        for (const auto& v : vd->names) vars[v] = vd->sort;
      }
    }

    for (const auto& item : ast.items) {
      const EqDeclAst* eq = std::get_if<EqDeclAst>(&item);
      if (!eq) continue;
      out.eqs.push_back(parse_equation(*eq, out, vars, name));
    }
  }

public:
  static Equation parse_equation(const EqDeclAst& eq, const FlatModule& m,
                                 const std::map<std::string, std::string>& vars,
                                 const std::string& origin, int layer = 0) {
    TermParser lp(m, vars);
    Equation e;
    e.lhs = lp.parse(eq.lhs);
    TermParser rp(m, lp.vars());
    e.rhs = rp.parse(eq.rhs);
    if (eq.conditional) {
      TermParser cp(m, rp.vars());
      e.cond = cp.parse(eq.cond);
      std::string cs = least_sort(e.cond, m);
      if (!m.sort_le(cs, "Bool"))
        throw ParseError("equation condition of sort " + cs, eq.line);
    }
    least_sort(e.lhs, m);
    least_sort(e.rhs, m);
    if (e.lhs->kind != Term::Kind::App)
      throw ParseError("equation left side must be an operator application", eq.line);
    std::set<std::string> lv, rv;
    collect_vars(e.lhs, lv);
    collect_vars(e.rhs, rv);
    if (e.cond) collect_vars(e.cond, rv);
    for (const auto& v : rv)
      if (!lv.count(v))
        throw ParseError("variable '" + v + "' unbound by equation left side", eq.line);
    e.label = origin + ":" + std::to_string(eq.line);
    e.layer = layer;
    return e;
  }
};

}  // namespace osr
