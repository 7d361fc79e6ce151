#pragma once

// Entry points for the automaton-facing subcommands; kept out of the tool's
// main so the acceptance suite can drive the same code paths.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "session.hpp"

namespace osr {

inline std::vector<Rational> parse_ticks(const std::string& text) {
  std::vector<Rational> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    Rational r;
    if (!Rational::parse(cur, r)) throw std::runtime_error("bad tick value: " + cur);
    out.push_back(r);
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  if (out.empty()) throw std::runtime_error("empty tick menu");
  return out;
}

inline int run_simulate_cli(const std::string& trace_path, const std::string& params_text,
                            int cars) {
  try {
    Params prm = Params::parse(params_text);
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot open " + trace_path);
    std::vector<Action> trace = parse_trace(in);
    for (const Action& a : trace)
      if (a.car >= cars)
        throw std::runtime_error("action '" + a.str() + "' names a car beyond --cars " +
                                 std::to_string(cars));
    OracleState st = init_state(cars);
    std::cout << "params cs0=" << prm.cs0.str() << " cs1=" << prm.cs1.str()
              << " t0=" << prm.t0.str() << (prm.t0_positive() ? "" : "  [warning: t0 <= 0]")
              << "\n";
    auto show = [&](const OracleState& s) {
      std::cout << "  now=" << s.now.str() << " l=" << s.l.str() << " color="
                << color_name(s.color);
      for (std::size_t i = 0; i < s.cars.size(); ++i) {
        std::cout << "  p" << i + 1 << ": pos=" << s.cars[i].pos.str()
                  << (s.cars[i].going ? " going" : "") << (s.cars[i].cs ? " cs" : "")
                  << (s.ps[i] ? " reg" : "");
      }
      std::cout << "\n";
    };
    std::cout << "init\n";
    show(st);
    int effective = 0, stuttered = 0;
    for (const Action& a : trace) {
      OracleState nx = step(st, a, prm);
      bool moved = !(nx == st);
      (moved ? effective : stuttered)++;
      std::cout << a.str() << (moved ? "" : "  [ineffective]") << "\n";
      st = std::move(nx);
      show(st);
    }
    std::cout << "steps: " << trace.size() << " (" << effective << " effective, " << stuttered
              << " ineffective)\n";
    bool safe = true;
    for (std::size_t p = 0; p < st.cars.size(); ++p)
      for (int k = 1; k <= 7; ++k)
        if (!inv_holds(st, prm, k, (int)p)) {
          std::cout << "final state violates inv" << k << " for p" << p + 1 << "\n";
          safe = false;
        }
    if (safe) std::cout << "final state satisfies inv1..inv7\n";
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "simulate: " << ex.what() << "\n";
    return 2;
  }
}

inline int run_search_cli(const std::string& params_text, int cars, const std::string& ticks_text,
                          int depth) {
  try {
    Params prm = Params::parse(params_text);
    std::vector<Rational> ticks = parse_ticks(ticks_text);
    SearchResult res = bounded_search(prm, cars, ticks, depth);
    std::cout << "params cs0=" << prm.cs0.str() << " cs1=" << prm.cs1.str()
              << " t0=" << prm.t0.str() << (prm.t0_positive() ? "" : "  [warning: t0 <= 0]")
              << "  cars=" << cars << "  depth=" << depth << "\n";
    std::cout << "states " << res.states << ", transitions " << res.transitions
              << ", depth reached " << res.depth_reached << "\n";
    for (int k = 1; k <= 7; ++k) {
      auto it = res.violations.find(k);
      if (it == res.violations.end()) {
        std::cout << "inv" << k << ": holds on every visited state\n";
      } else {
        std::cout << "inv" << k << ": VIOLATED, witness:";
        for (const Action& a : it->second) std::cout << " " << a.str() << ";";
        std::cout << "\n";
      }
    }
    return res.violations.empty() ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "search: " << ex.what() << "\n";
    return 2;
  }
}

inline int run_compare_cli(const std::string& params_text, int cars, unsigned seed, int count,
                           std::vector<std::string> dirs, long budget) {
  try {
    Params prm = Params::parse(params_text);
    if (dirs.empty()) dirs.push_back("corpus");
    ModuleRegistry reg;
    reg.search_dirs = dirs;
    const FlatModule& ms = reg.flat("MS");
    std::vector<Rational> ticks = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    CompareOutcome out = compare_random_traces(ms, prm, seed, count, cars, 8, ticks, budget);
    std::cout << "seed " << seed << ": " << out.traces << " traces, " << out.mismatches
              << " mismatches\n";
    for (const auto& r : out.reports) std::cout << r;
    return out.mismatches == 0 ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "compare: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace osr
