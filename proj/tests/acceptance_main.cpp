// Acceptance gate: one line of output per criterion, exit 0 only if all pass.
// Expected values and time limits are pinned here, in code, so a regression
// in either results or performance turns the gate red.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "osr/bool_ring.hpp"
#include "osr/engine.hpp"
#include "osr/match.hpp"
#include "osr/oracle.hpp"
#include "osr/parser.hpp"
#include "osr/proof.hpp"
#include "osr/session.hpp"
#include "osr/term.hpp"

using osr::FlatModule;
using osr::ModuleRegistry;
using osr::Rational;
using osr::Session;
using osr::Term;
using osr::TermPtr;
using osr::ac_flatten;
using osr::print_term;
using osr::term_eq;

namespace {

// Pinned limits (wall clock, seconds).
constexpr double kGoldenSecs = 1.0;    // per pinned reduction
constexpr double kSimSecs = 10.0;      // whole two-car run
constexpr double kBoolSecs = 30.0;     // 10,000 random formulas
constexpr double kCompareSecs = 60.0;  // 1,000 random traces
constexpr double kSearchSecs = 120.0;  // both reachability searches
constexpr unsigned kCompareSeed = 20260823u;

int failures = 0;

void report(int n, const std::string& title, bool pass, const std::string& detail) {
  std::cout << "criterion " << n << " (" << title << "): " << (pass ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " - " << detail;
  std::cout << "\n";
  if (!pass) ++failures;
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string corpus(const std::string& name) {
  return std::string(OSR_CORPUS_DIR) + "/" + name;
}

ModuleRegistry make_registry() {
  ModuleRegistry reg;
  reg.search_dirs = {OSR_CORPUS_DIR};
  return reg;
}

// --------------------------------------------------------------- criterion 1

void criterion1() {
  const struct {
    const char* mod;
    const char* in;
    const char* out;
  } cases[] = {
      {"LABEL", "next(next(green))", "red"},
      {"LABEL", "next(green) = next(yellow)", "false"},
      {"SIGNAL", "color(change(change(init)))", "red"},
      {"RAT", "1/2 + 3/4", "5/4"},
      {"PIDS", "p2 in p1 p2 p3", "true"},
      {"PIDS", "p2 in p1 p3", "false"},
  };
  ModuleRegistry reg = make_registry();
  bool ok = true;
  std::string detail;
  double worst = 0;
  for (const auto& c : cases) {
    const FlatModule& m = reg.flat(c.mod);
    TermPtr in = osr::parse_term(c.in, m);
    osr::RewriteContext ctx(m);
    auto t0 = std::chrono::steady_clock::now();
    TermPtr out = ctx.reduce(in);
    double dt = secs_since(t0);
    worst = std::max(worst, dt);
    if (print_term(out) != c.out) {
      ok = false;
      detail = std::string(c.in) + " gave " + print_term(out) + ", wanted " + c.out;
      break;
    }
    if (dt >= kGoldenSecs) {
      ok = false;
      detail = std::string(c.in) + " took " + std::to_string(dt) + "s";
      break;
    }
  }
  if (ok) {
    Session s;
    s.registry.search_dirs = {OSR_CORPUS_DIR};
    s.run_file(corpus("golden.cafe"));
    if (!s.all_ok() || s.results.size() != 6) {
      ok = false;
      detail = "golden script disagreed with its expectations";
    }
  }
  if (ok) {
    std::ostringstream d;
    d << "6/6 pinned reductions, slowest " << worst << "s";
    detail = d.str();
  }
  report(1, "pinned reductions", ok, detail);
}

// --------------------------------------------------------------- criterion 2

void criterion2() {
  const struct {
    const char* in;
    const char* out;
  } pinned[] = {
      {"pos(p1, st(2))", "5"},  {"pos(p2, st(2))", "2"},
      {"pos(p1, st(3))", "8"},  {"pos(p2, st(3))", "5"},
      {"pos(p1, st(4))", "10"}, {"pos(p2, st(4))", "7"},
      {"pos(p1, st(5))", "13"}, {"pos(p2, st(5))", "10"},
      {"now(st(12))", "5"},     {"now(st(13))", "8"},
  };
  Session s;
  s.registry.search_dirs = {OSR_CORPUS_DIR};
  auto t0 = std::chrono::steady_clock::now();
  s.run_file(corpus("simulation.cafe"));
  double dt = secs_since(t0);

  bool ok = s.all_ok() && s.results.size() == 12;
  std::string detail = ok ? "" : "script results disagreed with expectations";
  if (ok) {
    for (const auto& p : pinned) {
      bool found = false;
      for (const auto& r : s.results) {
        if (r.input && print_term(r.input) == p.in) {
          found = true;
          if (print_term(r.output) != p.out) {
            ok = false;
            detail = std::string(p.in) + " gave " + print_term(r.output) + ", wanted " + p.out;
          }
          break;
        }
      }
      if (!found) {
        ok = false;
        detail = std::string("missing reduction ") + p.in;
      }
      if (!ok) break;
    }
  }
  if (ok && dt >= kSimSecs) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  }
  if (ok) {
    std::ostringstream d;
    d << "10 pinned observations in " << dt << "s";
    detail = d.str();
  }
  report(2, "two-car trajectory", ok, detail);
}

// --------------------------------------------------------------- criterion 3

osr::OpenBlock first_open(ModuleRegistry& reg, const std::string& path) {
  osr::Script sc = reg.load_file(path);
  for (auto& item : sc.items)
    if (auto* ob = std::get_if<osr::OpenBlock>(&item)) return std::move(*ob);
  throw std::runtime_error("no open block in " + path);
}

void criterion3() {
  bool ok = true;
  std::string detail;
  std::size_t leaves = 0;
  try {
    // Basis: every invariant holds initially.
    ModuleRegistry reg = make_registry();
    osr::Passage basis = osr::make_passage(reg, first_open(reg, corpus("proofs/basis.cafe")));
    osr::Verdict vb = osr::run_goal(basis.mod, basis.goals.at(0).term, 1000000, true);
    if (vb.kind != osr::VerdictKind::proved) {
      ok = false;
      detail = "basis passage not proved";
    }

    // The induction step for time passing sticks without case analysis.
    if (ok) {
      ModuleRegistry reg2 = make_registry();
      osr::Passage tick = osr::make_passage(reg2, first_open(reg2, corpus("proofs/step_tick.cafe")));
      osr::Verdict vt = osr::run_goal(tick.mod, tick.goals.at(0).term, 1000000, true);
      if (vt.kind != osr::VerdictKind::stuck) {
        ok = false;
        detail = "un-split time step should be stuck";
      }
    }

    // Guarding an unreachable case with a proven invariant discharges it.
    if (ok) {
      Session s;
      s.registry.search_dirs = {OSR_CORPUS_DIR};
      s.run_file(corpus("paper_passages.cafe"));
      bool found = false;
      for (const auto& r : s.results) {
        if (r.input && print_term(r.input) == "inv3(p, s) implies istep1(p)") {
          found = true;
          if (!r.ok || print_term(r.output) != "true") {
            ok = false;
            detail = "guarded passage not proved";
          }
        }
      }
      if (!found) {
        ok = false;
        detail = "guarded passage missing from the demonstration script";
      }
      if (ok && !s.all_ok()) {
        ok = false;
        detail = "passage demonstration script disagreed with expectations";
      }
    }

    // The complete plan: membership lemma by structural induction, basis,
    // and all six transitions against all seven invariants.
    if (ok) {
      ModuleRegistry reg3 = make_registry();
      osr::PlanRunner runner(reg3);
      osr::PlanReport rep = runner.run(osr::parse_plan(corpus("proofs/plan.plan")));
      leaves = rep.outcomes.size();
      if (!rep.pass || rep.proved != (long)rep.outcomes.size()) {
        ok = false;
        detail = "plan left unproved leaves";
      }
    }

    // And the command-line entry point agrees, with exit status 0.
    if (ok) {
      std::ostringstream sink;
      std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
      int rc = osr::run_prove_cli(corpus("proofs/plan.plan"), {OSR_CORPUS_DIR}, 1000000,
                                  false, "text");
      std::cout.rdbuf(old);
      if (rc != 0) {
        ok = false;
        detail = "prove exit status " + std::to_string(rc);
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  if (ok) {
    std::ostringstream d;
    d << "basis proved, bare step stuck, guarded passage proved, plan " << leaves << "/"
      << leaves << " leaves proved (leaf count is this tool's own tally)";
    detail = d.str();
  }
  report(3, "proof development", ok, detail);
}

// --------------------------------------------------------------- criterion 4

bool prop_eval(const TermPtr& t, unsigned assignment) {
  if (t->kind == Term::Kind::Bool) return t->b;
  const std::string& n = t->name;
  if (n == "not_") return !prop_eval(t->args[0], assignment);
  if (n == "_and_") {
    bool v = true;
    for (const auto& a : t->args) v = v && prop_eval(a, assignment);
    return v;
  }
  if (n == "_or_") {
    bool v = false;
    for (const auto& a : t->args) v = v || prop_eval(a, assignment);
    return v;
  }
  if (n == "_xor_") {
    bool v = false;
    for (const auto& a : t->args) v = v != prop_eval(a, assignment);
    return v;
  }
  if (n == "_implies_") return !prop_eval(t->args[0], assignment) || prop_eval(t->args[1], assignment);
  if (n == "a") return assignment & 1u;
  if (n == "b") return assignment & 2u;
  if (n == "c") return assignment & 4u;
  if (n == "d") return assignment & 8u;
  throw std::runtime_error("unexpected operator " + n);
}

TermPtr prop_gen(std::mt19937& rng, const std::vector<TermPtr>& atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_int_distribution<std::size_t> which(0, atoms.size() - 1);
  switch (pick(rng)) {
    case 0:
    case 1:
      return atoms[which(rng)];
    case 2:
      return Term::app("not_", {prop_gen(rng, atoms, depth - 1)});
    case 3:
      return Term::app("_and_", {prop_gen(rng, atoms, depth - 1), prop_gen(rng, atoms, depth - 1)});
    case 4:
      return Term::app("_or_", {prop_gen(rng, atoms, depth - 1), prop_gen(rng, atoms, depth - 1)});
    case 5:
      return Term::app("_xor_", {prop_gen(rng, atoms, depth - 1), prop_gen(rng, atoms, depth - 1)});
    case 6:
      return Term::app("_implies_", {prop_gen(rng, atoms, depth - 1), prop_gen(rng, atoms, depth - 1)});
    default:
      return Term::bool_lit((rng() & 1u) != 0);
  }
}

void criterion4() {
  FlatModule m;
  m.name = "PROP";
  osr::add_builtin_signature(m);
  for (const char* n : {"a", "b", "c", "d"})
    m.add_op(osr::Operator{n, {}, "Bool", {}, false, false, true});
  std::vector<TermPtr> all_atoms = {Term::app("a"), Term::app("b"), Term::app("c"),
                                    Term::app("d")};

  std::mt19937 rng(424242u);
  std::uniform_int_distribution<int> natoms(1, 4);
  bool ok = true;
  std::string detail;
  auto t0 = std::chrono::steady_clock::now();
  int iters = 10000;
  for (int i = 0; ok && i < iters; ++i) {
    std::vector<TermPtr> atoms(all_atoms.begin(), all_atoms.begin() + natoms(rng));
    TermPtr f = ac_flatten(prop_gen(rng, atoms, 4), m);
    TermPtr g = ac_flatten(prop_gen(rng, atoms, 4), m);
    TermPtr nf = osr::bool_normalize(f, m);
    TermPtr ng = osr::bool_normalize(g, m);
    bool same = true;
    for (unsigned asg = 0; asg < 16; ++asg) {
      if (prop_eval(nf, asg) != prop_eval(f, asg) || prop_eval(ng, asg) != prop_eval(g, asg)) {
        ok = false;
        detail = "normal form changed the truth table of " + print_term(f);
        break;
      }
      if (prop_eval(f, asg) != prop_eval(g, asg)) same = false;
    }
    if (ok && term_eq(nf, ng) != same) {
      ok = false;
      detail = "equivalence misjudged for " + print_term(f) + "  vs  " + print_term(g);
    }
  }
  double dt = secs_since(t0);
  if (ok && dt >= kBoolSecs) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  }
  if (ok) {
    std::ostringstream d;
    d << iters << " random formulas agreed with the truth-table oracle in " << dt << "s";
    detail = d.str();
  }
  report(4, "propositional normalization", ok, detail);
}

// --------------------------------------------------------------- criterion 5

TermPtr junction_of(const std::vector<TermPtr>& args, const FlatModule& m) {
  if (args.size() == 1) return args[0];
  return ac_flatten(Term::app("_ _", args), m);
}

std::size_t leaf_count(const TermPtr& t) {
  if (t->args.empty()) return 1;
  std::size_t n = 0;
  for (const auto& a : t->args) n += leaf_count(a);
  return n;
}

void gather_candidates(const TermPtr& t, const FlatModule& m, std::vector<TermPtr>& out) {
  out.push_back(t);
  if (t->kind != Term::Kind::App) return;
  for (const auto& a : t->args) gather_candidates(a, m, out);
  if (t->name == "_ _") {
    std::size_t n = t->args.size();
    for (std::size_t mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<TermPtr> part;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) part.push_back(t->args[i]);
      out.push_back(junction_of(part, m));
    }
  }
}

std::string subst_key(const osr::Substitution& s) {
  std::string k;
  for (const auto& [v, t] : s.bind) k += v + "=" + print_term(t) + ";";
  return k;
}

std::set<std::string> brute_force_matches(const TermPtr& pattern, const TermPtr& subject,
                                          const FlatModule& m,
                                          const std::vector<TermPtr>& cands) {
  std::vector<std::pair<std::string, std::string>> vars;
  {
    std::set<std::string> seen;
    std::vector<TermPtr> stack = {pattern};
    while (!stack.empty()) {
      TermPtr t = stack.back();
      stack.pop_back();
      if (t->kind == Term::Kind::Var && seen.insert(t->name).second)
        vars.emplace_back(t->name, t->var_sort);
      for (const auto& a : t->args) stack.push_back(a);
    }
    std::sort(vars.begin(), vars.end());
  }
  std::set<std::string> found;
  if (vars.empty()) {
    if (term_eq(pattern, subject)) found.insert("");
    return found;
  }
  std::vector<std::vector<TermPtr>> images(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (const auto& cand : cands)
      if (m.sort_le(osr::least_sort(cand, m), vars[i].second)) images[i].push_back(cand);
  for (const auto& img : images)
    if (img.empty()) return found;

  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    osr::Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind[vars[i].first] = images[i][idx[i]];
    if (term_eq(osr::apply_substitution(sigma, pattern, m), subject))
      found.insert(subst_key(sigma));
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++idx[i] < images[i].size()) break;
      idx[i] = 0;
    }
    if (i == vars.size()) break;
  }
  return found;
}

std::vector<TermPtr> all_junctions(const std::vector<TermPtr>& pool, const FlatModule& m,
                                   std::size_t max_leaves) {
  std::vector<TermPtr> out;
  std::size_t n = pool.size();
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<TermPtr> part;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) part.push_back(pool[i]);
    if (part.size() > max_leaves) continue;
    out.push_back(junction_of(part, m));
  }
  return out;
}

std::size_t count_distinct_vars(const TermPtr& t) {
  std::set<std::string> vs;
  osr::collect_vars(t, vs);
  return vs.size();
}

void criterion5() {
  ModuleRegistry reg = make_registry();
  const FlatModule& m = reg.flat("PIDS");
  osr::Matcher matcher(m);
  auto c = [](const char* n) { return Term::app(n); };

  std::vector<TermPtr> consts = {c("p1"), c("p2"), c("p3"), c("nil")};
  std::vector<TermPtr> subjects = all_junctions(consts, m, 5);
  {
    std::vector<TermPtr> sets = subjects;
    for (const auto& lhs : {c("p1"), c("p2"), c("p3")})
      for (const auto& rhs : sets)
        if (1 + leaf_count(rhs) <= 5)
          subjects.push_back(ac_flatten(Term::app("_in_", {lhs, rhs}), m));
  }

  std::vector<TermPtr> pool = consts;
  for (const auto& v : {Term::var("X", "Pid"), Term::var("Y", "Pid"),
                        Term::var("S", "PSet"), Term::var("T", "PSet")})
    pool.push_back(v);
  std::vector<TermPtr> patterns;
  for (const auto& p : all_junctions(pool, m, 5))
    if (count_distinct_vars(p) <= 2) patterns.push_back(p);
  {
    std::vector<TermPtr> set_pats = all_junctions(pool, m, 4);
    for (const auto& lhs : {c("p1"), c("p2"), c("p3"), Term::var("X", "Pid"),
                            Term::var("Y", "Pid")})
      for (const auto& rhs : set_pats) {
        if (1 + leaf_count(rhs) > 5) continue;
        TermPtr p = ac_flatten(Term::app("_in_", {lhs, rhs}), m);
        if (count_distinct_vars(p) <= 2) patterns.push_back(p);
      }
  }

  bool ok = true;
  std::string detail;
  long pairs = 0, with_matches = 0;
  for (const auto& subject : subjects) {
    std::vector<TermPtr> cands;
    gather_candidates(subject, m, cands);
    std::sort(cands.begin(), cands.end(),
              [](const TermPtr& a, const TermPtr& b) { return osr::term_cmp(a, b) < 0; });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const TermPtr& a, const TermPtr& b) { return term_eq(a, b); }),
                cands.end());
    for (const auto& pattern : patterns) {
      std::set<std::string> expected = brute_force_matches(pattern, subject, m, cands);
      std::set<std::string> got;
      for (const auto& s : matcher.match(pattern, subject)) got.insert(subst_key(s));
      if (got != expected) {
        ok = false;
        detail = "pattern " + print_term(pattern) + " vs " + print_term(subject) + ": got " +
                 std::to_string(got.size()) + " matches, oracle " +
                 std::to_string(expected.size());
        break;
      }
      ++pairs;
      if (!expected.empty()) ++with_matches;
    }
    if (!ok) break;
  }
  if (ok) {
    std::ostringstream d;
    d << pairs << " pattern/subject pairs agreed with brute force (" << with_matches
      << " with matches)";
    detail = d.str();
  }
  report(5, "matching modulo ACI", ok, detail);
}

// --------------------------------------------------------------- criterion 6

void criterion6() {
  ModuleRegistry reg = make_registry();
  const FlatModule& ms = reg.flat("MS");
  std::vector<Rational> ticks = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  auto t0 = std::chrono::steady_clock::now();
  osr::CompareOutcome out =
      osr::compare_random_traces(ms, osr::Params{}, kCompareSeed, 1000, 3, 8, ticks);
  double dt = secs_since(t0);

  bool ok = out.traces == 1000 && out.mismatches == 0;
  std::string detail;
  if (!ok) {
    detail = std::to_string(out.mismatches) + " mismatches";
    if (!out.reports.empty()) detail += "; first: " + out.reports.front();
  } else if (dt >= kCompareSecs) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  } else {
    std::ostringstream d;
    d << "1000 seeded traces, engine and oracle agreed on every observation, " << dt << "s";
    detail = d.str();
  }
  report(6, "random trace cross-check", ok, detail);
}

// --------------------------------------------------------------- criterion 7

void criterion7() {
  std::vector<Rational> ticks = {Rational(1), Rational(2), Rational(3), Rational(5)};
  auto t0 = std::chrono::steady_clock::now();
  osr::SearchResult safe = osr::bounded_search(osr::Params{}, 2, ticks, 12);
  osr::Params rushed;
  rushed.t0 = Rational(2);
  osr::SearchResult broken = osr::bounded_search(rushed, 2, ticks, 12);
  double dt = secs_since(t0);

  bool ok = true;
  std::string detail;
  if (!safe.violations.empty()) {
    ok = false;
    detail = "violation reported for the safe parameters";
  } else if (broken.violations.empty()) {
    ok = false;
    detail = "no witness found for the too-short change period";
  } else {
    // Witnesses must replay to genuinely violating states.
    for (const auto& [k, trace] : broken.violations) {
      osr::OracleState bad = osr::run_trace(osr::init_state(2), trace, rushed).state;
      bool violated = false;
      for (int p = 0; p < 2; ++p) violated = violated || !osr::inv_holds(bad, rushed, k, p);
      if (!violated) {
        ok = false;
        detail = "witness for invariant " + std::to_string(k) + " does not replay";
        break;
      }
    }
  }
  if (ok && dt >= kSearchSecs) {
    ok = false;
    detail = "took " + std::to_string(dt) + "s";
  }
  if (ok) {
    std::ostringstream d;
    d << safe.states << " states clean with the stock parameters; " << broken.violations.size()
      << " invariant(s) refuted under the rushed light in " << dt << "s";
    detail = d.str();
  }
  report(7, "state-space safety check", ok, detail);
}

// --------------------------------------------------------------- criterion 8

void criterion8() {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(OSR_CORPUS_DIR))
    if (e.is_regular_file() && e.path().extension() == ".cafe")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  bool ok = true;
  std::string detail;
  long reductions = 0, both_ways = 0, memo_only = 0;
  for (const auto& f : files) {
    // Files under proofs/ define proof-plan passages; their goals close only
    // under the plan's case splits, so a stuck expectation there is expected.
    // Every other expectation must be met outright.
    bool plan_input = f.find("/proofs/") != std::string::npos;
    Session with;
    with.registry.search_dirs = {OSR_CORPUS_DIR};
    with.run_file(f);
    Session without;
    without.registry.search_dirs = {OSR_CORPUS_DIR};
    without.use_memo = false;
    without.run_file(f);
    if (with.results.size() != without.results.size()) {
      ok = false;
      detail = f + ": result counts differ with memoization off";
      break;
    }
    for (std::size_t i = 0; i < with.results.size(); ++i) {
      const auto& r = with.results[i];
      ++reductions;
      if (!r.error.empty() || r.exhausted || (!plan_input && !r.ok)) {
        ok = false;
        detail = f + " line " + std::to_string(r.line) + ": reduction not clean";
        break;
      }
      // Normal forms are fixed points.  (Re-reduction may still spend budget
      // re-evaluating failing rule conditions; the result must not change.)
      osr::RewriteContext again(*r.mod);
      TermPtr twice = again.reduce(r.output);
      if (!term_eq(twice, r.output)) {
        ok = false;
        detail = f + " line " + std::to_string(r.line) + ": normal form not a fixed point";
        break;
      }
      // Reduction never raises the sort.
      if (!r.mod->sort_le(osr::least_sort(r.output, *r.mod),
                          osr::least_sort(r.input, *r.mod))) {
        ok = false;
        detail = f + " line " + std::to_string(r.line) + ": sort went up";
        break;
      }
      // Memoization is invisible to results. Runs that exceed the budget
      // without the memo table demonstrate why it exists and are skipped.
      const auto& q = without.results[i];
      if (q.exhausted) {
        ++memo_only;
      } else if (!term_eq(q.output, r.output) || q.ok != r.ok) {
        ok = false;
        detail = f + " line " + std::to_string(r.line) + ": memoization changed the result";
        break;
      } else {
        ++both_ways;
      }
    }
    if (!ok) break;
  }
  if (ok && both_ways < 20) {
    ok = false;
    detail = "too few reductions completed without memoization to compare";
  }
  if (ok) {
    std::ostringstream d;
    d << reductions << " reductions: fixed points, sorts preserved; " << both_ways
      << " checked memo-off (" << memo_only << " exceed the budget without the memo table)";
    detail = d.str();
  }
  report(8, "reduction hygiene across the corpus", ok, detail);
}

}  // namespace

int main() {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
  } catch (const std::exception& ex) {
    std::cout << "acceptance aborted: " << ex.what() << "\n";
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criterion(s) failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
