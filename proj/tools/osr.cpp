// Command-line front end: batch workflows over .cafe scripts.
//
//   check     parse, flatten and run every script, honoring -- expect: marks
//   reduce    normalize one term in a named module
//   prove     run a proof plan (index file plus passage files)
//   simulate  run a trace file through the reference automaton
//   search    bounded reachability over the reference automaton
//   compare   randomized traces: reference automaton vs rewriting engine

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osr/cli_commands.hpp"
#include "osr/proof.hpp"

namespace {

int run_check(const std::vector<std::string>& files, const std::vector<std::string>& dirs,
              long budget, bool no_memo) {
  osr::Session session;
  session.registry.search_dirs = dirs;
  session.budget = budget;
  session.use_memo = !no_memo;
  bool ok = true;
  for (const auto& f : files) {
    try {
      session.run_file(f);
    } catch (const std::exception& ex) {
      std::cerr << f << ": " << ex.what() << "\n";
      ok = false;
    }
  }
  for (const auto& r : session.results) {
    std::cout << (r.mod ? r.mod->name : std::string("?")) << ":" << r.line << ": ";
    if (!r.error.empty()) {
      std::cout << "error: " << r.error << "\n";
    } else {
      std::cout << osr::print_term(r.input) << " --> "
                << (r.output ? osr::print_term(r.output) : std::string("?"));
      if (r.exhausted) std::cout << " [budget exhausted]";
      if (r.expect) std::cout << (r.ok ? "  [== " : "  [!= ") << *r.expect << "]";
      std::cout << "  (" << r.steps << " steps)\n";
    }
    ok = ok && r.ok;
  }
  std::cout << (ok ? "check: all passed\n" : "check: FAILED\n");
  return ok ? 0 : 1;
}

int run_reduce(const std::string& module, const std::string& term_text,
               const std::vector<std::string>& files, const std::vector<std::string>& dirs,
               long budget, bool no_memo, const std::string& expect) {
  osr::Session session;
  session.registry.search_dirs = dirs;
  session.budget = budget;
  session.use_memo = !no_memo;
  try {
    for (const auto& f : files) session.run_file(f);
    const osr::FlatModule& m = session.registry.flat(module);
    osr::TermPtr input = osr::parse_term(term_text, m);
    osr::RewriteContext& ctx = session.context_for(m);
    osr::TermPtr nf = ctx.reduce(input);
    std::cout << osr::print_term(nf) << "\n";
    std::cout << "(" << ctx.stats().steps << " steps, " << ctx.stats().memo_hits
              << " memo hits)\n";
    if (!expect.empty()) {
      osr::TermPtr want = osr::parse_term(expect, m);
      if (!osr::term_eq(want, nf)) {
        std::cerr << "expected " << osr::print_term(want) << "\n";
        return 1;
      }
    }
    return 0;
  } catch (const osr::BudgetExhausted&) {
    std::cerr << "budget exhausted\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"order-sorted rewriting, proof passages and a hybrid-automaton reference"};
  app.require_subcommand(1);

  std::vector<std::string> files, dirs;
  long budget = 1000000;
  bool no_memo = false;
  std::string format = "text";

  auto add_common = [&](CLI::App* c) {
    c->add_option("--path", dirs, "extra import search directories");
    c->add_option("--budget", budget, "rewrite step budget");
    c->add_flag("--no-memo", no_memo, "disable memoization");
  };

  auto* check = app.add_subcommand("check", "run .cafe scripts and their expectations");
  check->add_option("files", files, "script files")->required()->check(CLI::ExistingFile);
  add_common(check);

  auto* reduce = app.add_subcommand("reduce", "reduce a term to normal form");
  std::string module, term_text, expect_text;
  reduce->add_option("module", module, "module name")->required();
  reduce->add_option("term", term_text, "term text")->required();
  reduce->add_option("--file", files, "prelude scripts loaded first")->check(CLI::ExistingFile);
  reduce->add_option("--expect", expect_text, "assert the normal form equals this term");
  add_common(reduce);

  auto* prove = app.add_subcommand("prove", "run a proof plan index");
  std::string plan_path;
  prove->add_option("plan", plan_path, "plan index file")->required()->check(CLI::ExistingFile);
  prove->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_common(prove);

  auto* simulate = app.add_subcommand("simulate", "run a trace through the reference automaton");
  std::string trace_path, params_text = "5,10,5";
  int cars = 2;
  simulate->add_option("--trace", trace_path, "trace file, one action per line")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--params", params_text, "cs0,cs1,t0");
  simulate->add_option("--cars", cars, "number of cars (ids p1..pN)");

  auto* search = app.add_subcommand("search", "bounded reachability check of the safety property");
  std::string ticks_text = "1,2,3,5";
  int depth = 12;
  search->add_option("--params", params_text, "cs0,cs1,t0");
  search->add_option("--cars", cars, "number of cars (ids p1..pN)");
  search->add_option("--ticks", ticks_text, "comma-separated tick menu");
  search->add_option("--depth", depth, "maximum trace length");

  auto* compare = app.add_subcommand("compare", "randomized engine vs automaton agreement");
  unsigned seed = 1;
  int count = 1000;
  compare->add_option("--params", params_text, "cs0,cs1,t0");
  compare->add_option("--seed", seed, "random seed");
  compare->add_option("--count", count, "number of traces");
  compare->add_option("--cars", cars, "maximum number of cars");
  compare->add_option("--path", dirs, "import search directories for the system module");
  compare->add_option("--budget", budget, "rewrite step budget");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return run_check(files, dirs, budget, no_memo);
  if (reduce->parsed())
    return run_reduce(module, term_text, files, dirs, budget, no_memo, expect_text);
  if (prove->parsed()) return osr::run_prove_cli(plan_path, dirs, budget, no_memo, format);
  if (simulate->parsed()) return osr::run_simulate_cli(trace_path, params_text, cars);
  if (search->parsed()) return osr::run_search_cli(params_text, cars, ticks_text, depth);
  if (compare->parsed()) return osr::run_compare_cli(params_text, cars, seed, count, dirs, budget);
  return 2;
}
