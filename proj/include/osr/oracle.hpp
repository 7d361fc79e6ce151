#pragma once

// Reference semantics for the signal-controlled road: an explicit-state hybrid
// automaton kept deliberately independent of the rewriting engine, so each can
// cross-check the other. States carry the clock, the signal, and per-car data;
// actions are total, an action whose guard fails leaves the state unchanged.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"
#include "parser.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace osr {

struct BadParams : std::runtime_error {
  explicit BadParams(const std::string& what) : std::runtime_error(what) {}
};

struct Params {
  Rational cs0{5}, cs1{10}, t0{5};

  // The critical section must be a proper interval right of the origin.
  // A positive signal period is assumed by the safety argument but not
  // required for the automaton to be well defined; report it separately.
  void validate() const {
    if (!(Rational(0) < cs0 && cs0 < cs1))
      throw BadParams("need 0 < cs0 < cs1, got cs0 = " + cs0.str() + ", cs1 = " + cs1.str());
  }
  bool t0_positive() const { return Rational(0) < t0; }

  static Params parse(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
      if (c == ',') { parts.push_back(cur); cur.clear(); }
      else cur += c;
    }
    parts.push_back(cur);
    Params p;
    if (parts.size() != 3 || !Rational::parse(parts[0], p.cs0) ||
        !Rational::parse(parts[1], p.cs1) || !Rational::parse(parts[2], p.t0))
      throw BadParams("params must be cs0,cs1,t0 with rational components: " + text);
    p.validate();
    return p;
  }
};

enum class Color { green, red, yellow };  // declaration order of the label constants

inline Color next_color(Color c) {
  switch (c) {
    case Color::green: return Color::yellow;
    case Color::yellow: return Color::red;
    case Color::red: return Color::green;
  }
  return Color::green;
}

inline const char* color_name(Color c) {
  switch (c) {
    case Color::green: return "green";
    case Color::red: return "red";
    case Color::yellow: return "yellow";
  }
  return "?";
}

struct CarState {
  Rational pos;
  bool going = false;
  bool cs = false;
  bool operator==(const CarState& o) const {
    return pos == o.pos && going == o.going && cs == o.cs;
  }
};

struct OracleState {
  Rational now, l;
  Color color = Color::green;
  std::vector<CarState> cars;
  std::vector<bool> ps;  // cars registered with the controller

  bool operator==(const OracleState& o) const {
    return now == o.now && l == o.l && color == o.color && cars == o.cars && ps == o.ps;
  }

  std::string key() const {
    std::string k = now.str() + "|" + l.str() + "|" + color_name(color);
    for (std::size_t i = 0; i < cars.size(); ++i) {
      k += "|" + cars[i].pos.str();
      k += cars[i].going ? 'g' : '.';
      k += cars[i].cs ? 'c' : '.';
      k += ps[i] ? 'p' : '.';
    }
    return k;
  }
};

inline OracleState init_state(int cars) {
  OracleState st;
  st.cars.resize(cars);
  st.ps.assign(cars, false);
  return st;
}

struct Action {
  enum class Kind { change, go, stop, in, out, tick };
  Kind kind = Kind::change;
  int car = 0;  // zero-based; car i prints as p(i+1)
  Rational r;   // tick duration

  std::string str() const {
    switch (kind) {
      case Kind::change: return "change";
      case Kind::go: return "go p" + std::to_string(car + 1);
      case Kind::stop: return "stop p" + std::to_string(car + 1);
      case Kind::in: return "in p" + std::to_string(car + 1);
      case Kind::out: return "out p" + std::to_string(car + 1);
      case Kind::tick: return "tick " + r.str();
    }
    return "?";
  }

  static std::optional<Action> parse(const std::string& line) {
    std::istringstream in(line);
    std::string word, arg;
    if (!(in >> word)) return std::nullopt;
    Action a;
    if (word == "change") {
      if (in >> arg) return std::nullopt;
      return a;
    }
    if (!(in >> arg)) return std::nullopt;
    std::string rest;
    if (in >> rest) return std::nullopt;
    if (word == "tick") {
      a.kind = Kind::tick;
      if (!Rational::parse(arg, a.r)) return std::nullopt;
      return a;
    }
    if (word == "go") a.kind = Kind::go;
    else if (word == "stop") a.kind = Kind::stop;
    else if (word == "in") a.kind = Kind::in;
    else if (word == "out") a.kind = Kind::out;
    else return std::nullopt;
    if (arg.size() < 2 || arg[0] != 'p') return std::nullopt;
    for (std::size_t i = 1; i < arg.size(); ++i)
      if (!std::isdigit((unsigned char)arg[i])) return std::nullopt;
    a.car = std::stoi(arg.substr(1)) - 1;
    if (a.car < 0) return std::nullopt;
    return a;
  }
};

// The five conjuncts a registered car imposes on a time step of length r.
inline bool car_tick_ok(const OracleState& st, int p, const Rational& r, const Params& prm) {
  const CarState& c = st.cars[p];
  Rational q = c.pos + r;
  if (c.cs && c.going && !(prm.cs0 <= q && q <= prm.cs1)) return false;
  if (!c.cs && c.going && !(q <= prm.cs0 || prm.cs1 <= q)) return false;
  if (st.color != Color::green && c.cs && !c.going) return false;
  if (c.going && prm.cs0 < q && q <= prm.cs1 && !c.cs) return false;
  if (c.going && prm.cs1 < q && c.cs) return false;
  return true;
}

// Only registered cars constrain time; the step length is bounded by the
// section width so no car can cross the whole section unnoticed.
inline bool tick_ok(const OracleState& st, const Rational& r, const Params& prm) {
  if (!(Rational(0) <= r && r <= prm.cs1 - prm.cs0)) return false;
  for (std::size_t p = 0; p < st.cars.size(); ++p)
    if (st.ps[p] && !car_tick_ok(st, (int)p, r, prm)) return false;
  return true;
}

inline bool effective(const OracleState& st, const Action& a, const Params& prm) {
  switch (a.kind) {
    case Action::Kind::change: return st.l <= st.now;
    case Action::Kind::go: return true;
    case Action::Kind::stop: return true;
    case Action::Kind::in:
      return st.cars[a.car].pos == prm.cs0 && st.color == Color::green;
    case Action::Kind::out: return st.cars[a.car].pos == prm.cs1;
    case Action::Kind::tick: return tick_ok(st, a.r, prm);
  }
  return false;
}

inline OracleState step(const OracleState& st, const Action& a, const Params& prm) {
  OracleState nx = st;
  switch (a.kind) {
    case Action::Kind::change:
      if (st.l <= st.now) {
        nx.color = next_color(st.color);
        nx.l = st.now + prm.t0;
      }
      break;
    case Action::Kind::go:
      nx.cars[a.car].going = true;
      nx.ps[a.car] = true;
      break;
    case Action::Kind::stop:
      nx.cars[a.car].going = false;
      break;
    case Action::Kind::in:
      if (st.cars[a.car].pos == prm.cs0 && st.color == Color::green) nx.cars[a.car].cs = true;
      break;
    case Action::Kind::out:
      if (st.cars[a.car].pos == prm.cs1) nx.cars[a.car].cs = false;
      break;
    case Action::Kind::tick:
      if (tick_ok(st, a.r, prm)) {
        nx.now = st.now + a.r;
        for (auto& c : nx.cars)
          if (c.going) c.pos = c.pos + a.r;
      }
      break;
  }
  return nx;
}

struct TraceRun {
  OracleState state;
  int effective_steps = 0, stuttered_steps = 0;
};

inline TraceRun run_trace(const OracleState& st0, const std::vector<Action>& actions,
                          const Params& prm) {
  TraceRun out{st0, 0, 0};
  for (const Action& a : actions) {
    OracleState nx = step(out.state, a, prm);
    if (nx == out.state) ++out.stuttered_steps;
    else ++out.effective_steps;
    out.state = std::move(nx);
  }
  return out;
}

inline std::vector<Action> parse_trace(std::istream& in) {
  std::vector<Action> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cmt = line.find("--");
    if (cmt != std::string::npos) line = line.substr(0, cmt);
    bool blank = true;
    for (char c : line)
      if (!std::isspace((unsigned char)c)) blank = false;
    if (blank) continue;
    auto a = Action::parse(line);
    if (!a)
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": cannot parse '" +
                               line + "'");
    out.push_back(*a);
  }
  return out;
}

// State predicates mirroring the verified invariants; k is 1-based.
inline bool inv_holds(const OracleState& st, const Params& prm, int k, int p) {
  const CarState& c = st.cars[p];
  switch (k) {
    case 1: return !(st.color == Color::red && prm.cs0 < c.pos && c.pos < prm.cs1);
    case 2: return !(c.cs && c.pos < prm.cs1 && st.color == Color::red);
    case 3: return !c.cs || (prm.cs0 <= c.pos && c.pos <= prm.cs1);
    case 4:
      return !(c.cs && st.color != Color::green && st.l <= st.now) || prm.cs1 <= c.pos;
    case 5:
      return !(c.cs && st.color != Color::green) || prm.cs1 - c.pos <= st.l - st.now;
    case 6: return !(c.cs || prm.cs0 == c.pos || c.going) || st.ps[p];
    case 7: return !(prm.cs0 < c.pos && c.pos < prm.cs1) || c.cs;
  }
  return true;
}

// Breadth-first exploration up to a trace-length bound. Successors equal to
// their source (failed guards) are not treated as edges.
struct SearchResult {
  long states = 0;
  long transitions = 0;
  int depth_reached = 0;
  std::map<int, std::vector<Action>> violations;  // invariant index -> witness trace
};

inline std::vector<Action> action_menu(int cars, const std::vector<Rational>& ticks) {
  std::vector<Action> menu;
  menu.push_back(Action{Action::Kind::change, 0, Rational(0)});
  for (int p = 0; p < cars; ++p) {
    menu.push_back(Action{Action::Kind::go, p, Rational(0)});
    menu.push_back(Action{Action::Kind::stop, p, Rational(0)});
    menu.push_back(Action{Action::Kind::in, p, Rational(0)});
    menu.push_back(Action{Action::Kind::out, p, Rational(0)});
  }
  for (const Rational& r : ticks) menu.push_back(Action{Action::Kind::tick, 0, r});
  return menu;
}

inline SearchResult bounded_search(const Params& prm, int cars,
                                   const std::vector<Rational>& ticks, int depth) {
  prm.validate();
  SearchResult res;
  std::vector<Action> menu = action_menu(cars, ticks);

  struct Node {
    OracleState st;
    std::vector<Action> trace;
    int depth;
  };
  std::deque<Node> queue;
  std::set<std::string> seen;

  auto visit = [&](const OracleState& st, const std::vector<Action>& trace, int d) {
    if (!seen.insert(st.key()).second) return false;
    ++res.states;
    if (d > res.depth_reached) res.depth_reached = d;
    for (int k = 1; k <= 7; ++k)
      for (int p = 0; p < cars; ++p)
        if (!inv_holds(st, prm, k, p) && !res.violations.count(k)) res.violations[k] = trace;
    return true;
  };

  OracleState st0 = init_state(cars);
  visit(st0, {}, 0);
  queue.push_back(Node{std::move(st0), {}, 0});

  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (node.depth == depth) continue;
    for (const Action& a : menu) {
      OracleState nx = step(node.st, a, prm);
      if (nx == node.st) continue;  // stutter, not an edge
      ++res.transitions;
      std::vector<Action> trace = node.trace;
      trace.push_back(a);
      if (visit(nx, trace, node.depth + 1))
        queue.push_back(Node{std::move(nx), std::move(trace), node.depth + 1});
    }
  }
  return res;
}

// Cross-check harness: runs the same trace through the rewriting engine by
// building the nested action term over init and reducing each observation.
class EngineHarness {
public:
  EngineHarness(const FlatModule& base, int cars, const Params& prm, long budget = 1000000)
      : mod_(base), cars_(cars), prm_(prm), budget_(budget) {
    for (int i = 0; i < cars_; ++i)
      mod_.add_op(Operator{car_name(i), {}, "Pid", {}, false, false, false});
    for (int i = 0; i < cars_; ++i)
      for (int j = i + 1; j < cars_; ++j)
        add_eq(ac_flatten(Term::app("_=_", {car(i), car(j)}), mod_), Term::bool_lit(false));
    add_eq(Term::app("cs0"), Term::rat_lit(prm_.cs0));
    add_eq(Term::app("cs1"), Term::rat_lit(prm_.cs1));
    add_eq(Term::app("t0"), Term::rat_lit(prm_.t0));
  }

  static std::string car_name(int i) { return "p" + std::to_string(i + 1); }
  TermPtr car(int i) const { return Term::app(car_name(i)); }

  TermPtr trace_term(const std::vector<Action>& actions) const {
    TermPtr t = Term::app("init");
    for (const Action& a : actions) {
      switch (a.kind) {
        case Action::Kind::change: t = Term::app("change", {t}); break;
        case Action::Kind::go: t = Term::app("go", {car(a.car), t}); break;
        case Action::Kind::stop: t = Term::app("stop", {car(a.car), t}); break;
        case Action::Kind::in: t = Term::app("in", {car(a.car), t}); break;
        case Action::Kind::out: t = Term::app("out", {car(a.car), t}); break;
        case Action::Kind::tick: t = Term::app("tick", {Term::rat_lit(a.r), t}); break;
      }
    }
    return t;
  }

  // Fresh context per trace keeps memo tables from growing without bound.
  void begin_trace() { ctx_ = std::make_unique<RewriteContext>(mod_, budget_, true); }

  // Returns an empty string when every observation of st_term agrees with st.
  std::string compare_state(const TermPtr& st_term, const OracleState& st) {
    if (!ctx_) begin_trace();
    std::string m;
    check(m, Term::app("now", {st_term}), Term::rat_lit(st.now), "now");
    check(m, Term::app("l", {st_term}), Term::rat_lit(st.l), "l");
    check(m, Term::app("color", {st_term}), Term::app(color_name(st.color)), "color");
    for (int i = 0; i < cars_; ++i) {
      std::string who = "(" + car_name(i) + ")";
      check(m, Term::app("pos", {car(i), st_term}), Term::rat_lit(st.cars[i].pos), "pos" + who);
      check(m, Term::app("going", {car(i), st_term}), Term::bool_lit(st.cars[i].going),
            "going" + who);
      check(m, Term::app("cs", {car(i), st_term}), Term::bool_lit(st.cars[i].cs), "cs" + who);
    }
    check_ps(m, st_term, st);
    return m;
  }

  const FlatModule& module() const { return mod_; }

private:
  FlatModule mod_;
  std::unique_ptr<RewriteContext> ctx_;
  int cars_;
  Params prm_;
  long budget_;

  void add_eq(TermPtr lhs, TermPtr rhs) {
    mod_.eqs.push_back(Equation{std::move(lhs), std::move(rhs), nullptr, "harness", 1});
  }

  void check(std::string& msg, TermPtr obs, TermPtr want, const std::string& what) {
    TermPtr got;
    try {
      got = ctx_->reduce(obs);
    } catch (const std::exception& ex) {
      msg += what + ": engine error: " + std::string(ex.what()) + "\n";
      return;
    }
    if (!term_eq(got, want))
      msg += what + ": engine " + print_term(got) + ", automaton " + print_term(want) + "\n";
  }

  // The registered set normalizes to a flat juxtaposition over pids and nil;
  // nil is the empty set, so it is dropped before comparing memberships.
  void check_ps(std::string& msg, const TermPtr& st_term, const OracleState& st) {
    TermPtr got;
    try {
      got = ctx_->reduce(Term::app("ps", {st_term}));
    } catch (const std::exception& ex) {
      msg += "ps: engine error: " + std::string(ex.what()) + "\n";
      return;
    }
    std::set<std::string> names;
    bool bad = false;
    auto take = [&](const TermPtr& el) {
      if (el->kind == Term::Kind::App && el->args.empty()) {
        if (el->name != "nil") names.insert(el->name);
      } else {
        bad = true;
      }
    };
    if (got->kind == Term::Kind::App && got->name == "_ _")
      for (const auto& el : got->args) take(el);
    else
      take(got);
    std::set<std::string> want;
    for (int i = 0; i < cars_; ++i)
      if (st.ps[i]) want.insert(car_name(i));
    if (bad || names != want)
      msg += "ps: engine " + print_term(got) + ", automaton {" + [&] {
        std::string s;
        for (const auto& n : want) s += (s.empty() ? "" : " ") + n;
        return s;
      }() + "}\n";
  }
};

// Deterministic random traces for the agreement check.
inline std::vector<Action> random_trace(std::mt19937& rng, int cars, int max_len,
                                        const std::vector<Rational>& ticks) {
  std::uniform_int_distribution<int> len_d(0, max_len);
  std::uniform_int_distribution<int> kind_d(0, 5);
  std::uniform_int_distribution<int> car_d(0, cars - 1);
  std::uniform_int_distribution<int> tick_d(0, (int)ticks.size() - 1);
  int len = len_d(rng);
  std::vector<Action> out;
  for (int i = 0; i < len; ++i) {
    Action a;
    switch (kind_d(rng)) {
      case 0: a.kind = Action::Kind::change; break;
      case 1: a.kind = Action::Kind::go; a.car = car_d(rng); break;
      case 2: a.kind = Action::Kind::stop; a.car = car_d(rng); break;
      case 3: a.kind = Action::Kind::in; a.car = car_d(rng); break;
      case 4: a.kind = Action::Kind::out; a.car = car_d(rng); break;
      default: a.kind = Action::Kind::tick; a.r = ticks[tick_d(rng)]; break;
    }
    out.push_back(a);
  }
  return out;
}

struct CompareOutcome {
  int traces = 0;
  int mismatches = 0;
  std::vector<std::string> reports;
};

// Each trace is checked prefix by prefix so a disagreement names the earliest
// offending action.
inline CompareOutcome compare_random_traces(const FlatModule& base, const Params& prm,
                                            unsigned seed, int count, int max_cars, int max_len,
                                            const std::vector<Rational>& ticks,
                                            long budget = 1000000) {
  prm.validate();
  CompareOutcome out;
  std::mt19937 rng(seed);
  std::map<int, std::unique_ptr<EngineHarness>> harness;
  std::uniform_int_distribution<int> car_count_d(1, max_cars);
  for (int t = 0; t < count; ++t) {
    int cars = car_count_d(rng);
    std::vector<Action> trace = random_trace(rng, cars, max_len, ticks);
    auto& h = harness[cars];
    if (!h) h = std::make_unique<EngineHarness>(base, cars, prm, budget);
    h->begin_trace();
    OracleState st = init_state(cars);
    std::string m = h->compare_state(h->trace_term({}), st);
    for (std::size_t k = 0; m.empty() && k < trace.size(); ++k) {
      st = step(st, trace[k], prm);
      std::vector<Action> prefix(trace.begin(), trace.begin() + k + 1);
      m = h->compare_state(h->trace_term(prefix), st);
    }
    ++out.traces;
    if (!m.empty()) {
      ++out.mismatches;
      std::string hdr = "trace " + std::to_string(t) + " (cars " + std::to_string(cars) + "):";
      for (const Action& a : trace) hdr += " " + a.str() + ";";
      out.reports.push_back(hdr + "\n" + m);
    }
  }
  return out;
}

}  // namespace osr
