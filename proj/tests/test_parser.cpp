// Lexing, script/module parsing, flattening with imports, mixfix term
// parsing with precedence, and printing as the inverse of parsing.
#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <variant>
#include <vector>

#include "osr/parser.hpp"
#include "osr/term.hpp"

using osr::FlatModule;
using osr::ModuleRegistry;
using osr::ParseError;
using osr::Term;
using osr::TermPtr;
using osr::ac_flatten;
using osr::parse_term;
using osr::print_term;
using osr::term_eq;

namespace {

ModuleRegistry& registry() {
  static ModuleRegistry reg = [] {
    ModuleRegistry r;
    r.search_dirs = {OSR_CORPUS_DIR};
    return r;
  }();
  return reg;
}

TermPtr flat_parse(const std::string& text, const FlatModule& m,
                   std::map<std::string, std::string> vars = {}) {
  return ac_flatten(parse_term(text, m, std::move(vars)), m);
}

}  // namespace

TEST_CASE("scripts split into modules, open blocks, and reductions") {
  const char* src = R"(
    mod! T1{
      [A]
      ops x y : -> A
      op f : A A -> A {comm}
    }
    red in T1 : f(x, y) . -- expect: f(x, y)
    open T1 .
      op z : -> A .
      red f(x, z) .
    close
  )";
  osr::Script sc = osr::Parser(osr::lex(src)).parse_script();
  REQUIRE(sc.items.size() == 3);

  auto* mod = std::get_if<osr::ModuleAst>(&sc.items[0]);
  REQUIRE(mod != nullptr);
  CHECK(mod->name == "T1");
  CHECK(mod->denotation == osr::Denotation::Tight);

  auto* red = std::get_if<osr::RedCmd>(&sc.items[1]);
  REQUIRE(red != nullptr);
  CHECK(red->in_module == "T1");
  REQUIRE(red->expect.has_value());
  CHECK(*red->expect == "f(x, y)");

  auto* open = std::get_if<osr::OpenBlock>(&sc.items[2]);
  REQUIRE(open != nullptr);
  CHECK(open->base == "T1");
  CHECK(open->items.size() == 2);
}

TEST_CASE("flattening resolves imports transitively and keeps attributes") {
  const FlatModule& ms = registry().flat("MS");
  CHECK(ms.sorts.count("Pid") == 1);
  CHECK(ms.sorts.count("PSet") == 1);
  CHECK(ms.sorts.count("Label") == 1);
  CHECK(ms.sorts.count("Sys") == 1);

  const osr::Operator* guard3 = ms.find_op("c-tick", 3);
  REQUIRE(guard3 != nullptr);
  CHECK(guard3->arity.size() == 3);
  const osr::Operator* guard2 = ms.find_op("c-tick", 2);
  REQUIRE(guard2 != nullptr);
  CHECK(guard2->arity.size() == 2);

  // Junctions of any width resolve to the binary associative declaration.
  const osr::Operator* junction = ms.find_op("_ _", 5);
  REQUIRE(junction != nullptr);
  CHECK(junction->attrs.assoc);
  CHECK(junction->attrs.comm);
  CHECK(junction->attrs.idem);

  // Predicate declarations are Bool-valued operators.
  const FlatModule& inv = registry().flat("INV");
  const osr::Operator* inv1 = inv.find_op("inv1", 2);
  REQUIRE(inv1 != nullptr);
  CHECK(inv1->coarity == "Bool");

  // Behavioral operators are marked but otherwise ordinary.
  const FlatModule& sig = registry().flat("SIGNAL");
  const osr::Operator* color = sig.find_op("color", 1);
  REQUIRE(color != nullptr);
  CHECK(color->behavioral);
}

TEST_CASE("flattening rejects unknown sorts and operators") {
  ModuleRegistry reg;
  reg.search_dirs = {OSR_CORPUS_DIR};
  osr::Script bad1 = osr::Parser(osr::lex("mod B1{ op f : NoSuchSort -> Bool . }")).parse_script();
  reg.register_script(bad1, ".");
  CHECK_THROWS_AS(reg.flat("B1"), ParseError);

  osr::Script bad2 =
      osr::Parser(osr::lex("mod B2{ [A] op f : A -> A . var L : A . eq f(L) = g . }"))
          .parse_script();
  reg.register_script(bad2, ".");
  CHECK_THROWS(reg.flat("B2"));

  // Right-hand-side variables must occur on the left.
  osr::Script bad3 =
      osr::Parser(osr::lex("mod B3{ [A] op f : A -> A . vars L M : A . eq f(L) = M . }"))
          .parse_script();
  reg.register_script(bad3, ".");
  CHECK_THROWS_AS(reg.flat("B3"), ParseError);
}

TEST_CASE("term parsing honors precedence and the subtraction shorthand") {
  const FlatModule& ms = registry().flat("MS");

  // + binds tighter than <=.
  TermPtr t = flat_parse("cs0 + cs1 <= t0", ms);
  REQUIRE(t->name == "_<=_");
  CHECK(t->args[0]->name == "_+_");

  // a - b is a + (- b).
  CHECK(term_eq(flat_parse("cs1 - cs0", ms), flat_parse("cs1 + - cs0", ms)));
  CHECK(term_eq(flat_parse("cs1 - cs0", ms), flat_parse("- cs0 + cs1", ms)));

  // not binds a full comparison; and takes the two comparisons.
  TermPtr b = flat_parse("not 0 <= cs0 and 0 <= cs1", ms);
  REQUIRE(b->name == "_and_");
  bool saw_not = false, saw_cmp = false;
  for (const auto& a : b->args) {
    if (a->name == "not_") {
      saw_not = true;
      CHECK(a->args[0]->name == "_<=_");
    }
    if (a->name == "_<=_") saw_cmp = true;
  }
  CHECK(saw_not);
  CHECK(saw_cmp);

  // Conditionals parse as a single mixfix operator.
  TermPtr ite = flat_parse("if 0 <= cs0 then cs0 else cs1 fi", ms);
  CHECK(ite->name == "if_then_else_fi");
  REQUIRE(ite->args.size() == 3);

  // Equality is non-associative.
  CHECK_THROWS_AS(parse_term("0 = 0 = 0", ms), ParseError);

  // Inline variable syntax binds a sort.
  TermPtr v = parse_term("pos(P:Pid, init)", ms);
  REQUIRE(v->args[0]->kind == Term::Kind::Var);
  CHECK(v->args[0]->var_sort == "Pid");

  // Explicit variable environment.
  TermPtr w = parse_term("pos(P, tick(1/2, init))", ms, {{"P", "Pid"}});
  CHECK(w->name == "pos");
}

TEST_CASE("juxtaposition parses into junctions") {
  const FlatModule& pids = registry().flat("PIDS");
  TermPtr t = flat_parse("p1 p2 p3", pids);
  REQUIRE(t->name == "_ _");
  REQUIRE(t->args.size() == 3);
  TermPtr in = flat_parse("p2 in p1 p3", pids);
  REQUIRE(in->name == "_in_");
  CHECK(in->args[1]->name == "_ _");
}

TEST_CASE("ill-sorted and unknown terms are rejected") {
  const FlatModule& ms = registry().flat("MS");
  CHECK_THROWS_AS(parse_term("now(cs0)", ms), osr::SortMismatch);
  CHECK_THROWS_AS(parse_term("frobnicate(3)", ms), ParseError);
  CHECK_THROWS_AS(parse_term("now(", ms), ParseError);
  CHECK_THROWS_AS(parse_term("pos(P:NoSort, init)", ms), ParseError);
}

TEST_CASE("printing inverts parsing up to flattening") {
  const FlatModule& ms = registry().flat("MS");
  const FlatModule& pids = registry().flat("PIDS");
  const FlatModule& istep = registry().flat("ISTEP");
  struct Case {
    const FlatModule* m;
    const char* text;
    std::map<std::string, std::string> vars;
  };
  const std::vector<Case> cases = {
      {&pids, "p1 p2 p3", {}},
      {&pids, "p2 in p1 p3", {}},
      {&pids, "(p1 = p2) or (p2 in nil)", {}},
      {&ms, "cs1 + - cs0 <= t0", {}},
      {&ms, "pos(P, tick(1/2, init))", {{"P", "Pid"}}},
      {&istep, "if going(P, s) then pos(P, s) + X else pos(P, s) fi",
       {{"P", "Pid"}, {"X", "Rat"}}},
      {&ms, "not (color(init) = red) and 0 <= cs0", {}},
      {&ms, "c-tick(nil, 1, init)", {}},
  };
  for (const auto& c : cases) {
    TermPtr t = flat_parse(c.text, *c.m, c.vars);
    TermPtr back = flat_parse(print_term(t), *c.m, c.vars);
    INFO(c.text << "  printed as  " << print_term(t));
    CHECK(term_eq(back, t));
  }
}

TEST_CASE("dir_of splits a path at the final separator") {
  CHECK(osr::dir_of("/a/b/c.cafe") == "/a/b");
  CHECK(osr::dir_of("c.cafe") == ".");
}
