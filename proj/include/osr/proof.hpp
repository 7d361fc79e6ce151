#pragma once

// Proof passages and plans. A passage reduces goal terms inside a module
// extended with fresh constants and hypothesis equations; a plan arranges
// passages into case-split trees covering every transition constructor, plus
// structural lemmas, and judges the whole development PASS or FAIL.

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "session.hpp"

namespace osr {

struct NotEnumerable : std::runtime_error {
  explicit NotEnumerable(const std::string& what) : std::runtime_error(what) {}
};
struct IncompletePlan : std::runtime_error {
  explicit IncompletePlan(const std::string& what) : std::runtime_error(what) {}
};
struct PlanSyntax : std::runtime_error {
  explicit PlanSyntax(const std::string& what) : std::runtime_error(what) {}
};

enum class GoalMode { prove, refute, any };
enum class VerdictKind { proved, refuted, stuck, exhausted };

inline const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::proved: return "proved";
    case VerdictKind::refuted: return "refuted";
    case VerdictKind::stuck: return "stuck";
    case VerdictKind::exhausted: return "exhausted";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::stuck;
  TermPtr residual;  // normal form when neither literal
  long steps = 0;
};

inline Verdict run_goal(const FlatModule& m, const TermPtr& goal, long budget, bool memo) {
  RewriteContext ctx(m, budget, memo);
  Verdict v;
  try {
    TermPtr nf = ctx.reduce(goal);
    v.steps = ctx.stats().steps;
    if (nf->kind == Term::Kind::Bool) {
      v.kind = nf->b ? VerdictKind::proved : VerdictKind::refuted;
    } else {
      v.kind = VerdictKind::stuck;
      v.residual = nf;
    }
  } catch (const BudgetExhausted&) {
    v.kind = VerdictKind::exhausted;
    v.steps = ctx.stats().steps;
  }
  return v;
}

inline bool verdict_ok(GoalMode mode, VerdictKind k) {
  switch (mode) {
    case GoalMode::prove: return k == VerdictKind::proved;
    case GoalMode::refute: return k == VerdictKind::refuted;
    case GoalMode::any: return k == VerdictKind::proved || k == VerdictKind::refuted;
  }
  return false;
}

// A passage body: an extended copy of the base module plus parsed goals.
struct Passage {
  FlatModule mod;
  std::map<std::string, std::string> vars;
  struct Goal {
    TermPtr term;
    GoalMode mode = GoalMode::prove;
    int line = 0;
  };
  std::vector<Goal> goals;
};

inline GoalMode mode_from_expect(const std::optional<std::string>& expect) {
  if (!expect) return GoalMode::any;
  if (*expect == "true") return GoalMode::prove;
  if (*expect == "false") return GoalMode::refute;
  return GoalMode::any;
}

inline Passage make_passage(ModuleRegistry& reg, const OpenBlock& ob) {
  Passage p{reg.flat(ob.base), {}, {}};
  for (const auto& item : ob.items) {
    if (const OpDeclAst* od = std::get_if<OpDeclAst>(&item)) {
      for (const auto& n : od->names)
        p.mod.add_op(Operator{n, od->arity, od->coarity, od->attrs, od->behavioral, false, false});
    } else if (const VarDeclAst* vd = std::get_if<VarDeclAst>(&item)) {
      for (const auto& v : vd->names) p.vars[v] = vd->sort;
    } else if (const EqDeclAst* eq = std::get_if<EqDeclAst>(&item)) {
      p.mod.eqs.push_back(ModuleRegistry::parse_equation(*eq, p.mod, p.vars, "hyp", 1));
    } else {
      const RedCmd& rc = std::get<RedCmd>(item);
      TermParser tp(p.mod, p.vars);
      Passage::Goal g;
      g.term = tp.parse(rc.tokens);
      least_sort(g.term, p.mod);
      g.mode = mode_from_expect(rc.expect);
      g.line = rc.line;
      p.goals.push_back(std::move(g));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Case splits

struct SplitNode;
using SplitNodePtr = std::unique_ptr<SplitNode>;

struct SplitCase {
  std::string label;
  std::vector<std::string> hyp_texts;  // eq splits only
  SplitNodePtr child;                  // null: this case is a leaf
};

struct SplitNode {
  enum class Kind { bool_split, enum_split, eq_split };
  Kind kind = Kind::bool_split;
  std::string subject;        // bool: term text; enum: fresh constant name
  std::string justification;  // eq: completeness argument, reported as assumed
  std::vector<SplitCase> cases;
};

// first '=' at parenthesis depth zero splits an equation body
inline std::pair<std::vector<Token>, std::vector<Token>> split_eq_tokens(
    const std::vector<Token>& ts, const std::string& what) {
  int depth = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].text == "(") ++depth;
    else if (ts[i].text == ")") --depth;
    else if (ts[i].text == "=" && depth == 0)
      return {std::vector<Token>(ts.begin(), ts.begin() + i),
              std::vector<Token>(ts.begin() + i + 1, ts.end())};
  }
  throw PlanSyntax("no top-level '=' in " + what);
}

inline Equation hypothesis_from_text(const FlatModule& m,
                                     const std::map<std::string, std::string>& vars,
                                     std::string text, const std::string& origin) {
  std::vector<Token> ts = lex(text);
  if (!ts.empty() && (ts.front().text == "eq")) ts.erase(ts.begin());
  while (!ts.empty() && (ts.back().kind == Tok::Expect || ts.back().text == "."))
    ts.pop_back();
  auto [lhs, rhs] = split_eq_tokens(ts, "hypothesis '" + text + "'");
  EqDeclAst ast;
  ast.lhs = std::move(lhs);
  ast.rhs = std::move(rhs);
  return ModuleRegistry::parse_equation(ast, m, vars, origin, 1);
}

struct Branch {
  std::string label;
  FlatModule mod;
};

// Expands one split node into its case modules. Bool splits must cover both
// truth values; enum splits must list the constructor constants of a tight
// sort exactly and in declaration order; eq splits take their completeness
// from the stated justification.
inline std::vector<Branch> split_cases(const FlatModule& m,
                                       const std::map<std::string, std::string>& vars,
                                       const SplitNode& n) {
  std::vector<Branch> out;
  if (n.kind == SplitNode::Kind::bool_split) {
    if (n.cases.size() != 2 ||
        (n.cases[0].label != "true" && n.cases[0].label != "false") ||
        (n.cases[1].label != "true" && n.cases[1].label != "false") ||
        n.cases[0].label == n.cases[1].label)
      throw PlanSyntax("bool split on '" + n.subject + "' needs cases true and false");
    for (const auto& c : n.cases) {
      Branch b{c.label, m};
      b.mod.eqs.push_back(
          hypothesis_from_text(m, vars, n.subject + " = " + c.label, "split:" + c.label));
      out.push_back(std::move(b));
    }
    return out;
  }
  if (n.kind == SplitNode::Kind::enum_split) {
    const Operator* op = m.find_op(n.subject, 0);
    if (!op) throw NotEnumerable("no constant '" + n.subject + "' to enumerate");
    if (!m.tight_sorts.count(op->coarity))
      throw NotEnumerable("sort " + op->coarity + " of '" + n.subject +
                          "' has loose denotation; its values cannot be enumerated");
    std::vector<std::string> consts = m.constructor_consts(op->coarity);
    if (consts.empty())
      throw NotEnumerable("sort " + op->coarity + " has no constructor constants");
    if (n.cases.size() != consts.size())
      throw PlanSyntax("enum split on '" + n.subject + "' must cover: " + [&] {
        std::string s;
        for (const auto& c : consts) s += (s.empty() ? "" : ", ") + c;
        return s;
      }());
    for (std::size_t i = 0; i < consts.size(); ++i) {
      if (n.cases[i].label != consts[i])
        throw PlanSyntax("enum split case " + std::to_string(i + 1) + " must be '" + consts[i] +
                         "', got '" + n.cases[i].label + "'");
      Branch b{consts[i], m};
      b.mod.eqs.push_back(
          hypothesis_from_text(m, vars, n.subject + " = " + consts[i], "split:" + consts[i]));
      out.push_back(std::move(b));
    }
    return out;
  }
  if (n.cases.empty()) throw PlanSyntax("eq split needs at least one case");
  for (const auto& c : n.cases) {
    if (c.hyp_texts.empty())
      throw PlanSyntax("eq split case '" + c.label + "' has no hypotheses");
    Branch b{c.label, m};
    for (const auto& h : c.hyp_texts)
      b.mod.eqs.push_back(hypothesis_from_text(m, vars, h, "split:" + c.label));
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Plans

struct PlanStep {
  enum class Kind { lemma, basis, step };
  Kind kind = Kind::basis;
  std::string name;  // lemma name, or transition constructor for steps
  std::string file;
  std::vector<std::string> lemma_cases;
  SplitNodePtr tree;  // null: single leaf
};

struct Plan {
  std::string name;
  std::string dir;
  std::vector<PlanStep> steps;
};

// Indented plan syntax, two spaces per level:
//   plan NAME
//   lemma NAME file REL       followed by 'case LABEL' lines
//   basis file REL
//   step CONSTRUCTOR file REL followed by a split tree:
//     split bool TERM | split enum CONST | split eq JUSTIFICATION
//       case LABEL            bool: true/false; enum: constructor name
//         hyp EQUATION        eq splits only
//         split ...           nested split under this case
inline Plan parse_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlanSyntax("cannot open plan " + path);
  Plan plan;
  plan.dir = dir_of(path);

  // open splits on the path to the current line; a split at depth d takes its
  // cases at d+1 and their hyp lines or nested splits at d+2
  struct OpenSplit {
    SplitNode* node;
    std::size_t depth;
    SplitCase* cse = nullptr;
  };
  std::vector<OpenSplit> stack;
  PlanStep* cur = nullptr;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw PlanSyntax(path + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cmt = line.find('#');
    if (cmt != std::string::npos) line = line.substr(0, cmt);
    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    std::string body = line.substr(indent);
    while (!body.empty() && std::isspace((unsigned char)body.back())) body.pop_back();
    if (body.empty()) continue;
    if (indent % 2) fail("odd indentation");
    std::size_t depth = indent / 2;

    std::istringstream ls(body);
    std::string word;
    ls >> word;
    auto rest_of = [&]() {
      std::string r;
      std::getline(ls, r);
      std::size_t b = r.find_first_not_of(' ');
      return b == std::string::npos ? std::string() : r.substr(b);
    };

    if (depth == 0) {
      stack.clear();
      cur = nullptr;
      if (word == "plan") {
        plan.name = rest_of();
        continue;
      }
      PlanStep st;
      if (word == "lemma") {
        st.kind = PlanStep::Kind::lemma;
        ls >> st.name;
      } else if (word == "basis") {
        st.kind = PlanStep::Kind::basis;
        st.name = "basis";
      } else if (word == "step") {
        st.kind = PlanStep::Kind::step;
        ls >> st.name;
      } else {
        fail("expected plan, lemma, basis or step");
      }
      std::string kw;
      ls >> kw;
      if (kw != "file") fail("expected 'file'");
      ls >> st.file;
      if (st.file.empty()) fail("missing file name");
      plan.steps.push_back(std::move(st));
      cur = &plan.steps.back();
      continue;
    }

    if (!cur) fail("indented line outside any plan entry");
    if (cur->kind == PlanStep::Kind::lemma) {
      if (depth != 1 || word != "case") fail("lemma entries take 'case LABEL' lines");
      std::string label;
      ls >> label;
      if (label.empty()) fail("missing case label");
      cur->lemma_cases.push_back(label);
      continue;
    }

    if (word == "split") {
      auto node = std::make_unique<SplitNode>();
      std::string kind;
      ls >> kind;
      if (kind == "bool") node->kind = SplitNode::Kind::bool_split, node->subject = rest_of();
      else if (kind == "enum") node->kind = SplitNode::Kind::enum_split, node->subject = rest_of();
      else if (kind == "eq") node->kind = SplitNode::Kind::eq_split, node->justification = rest_of();
      else fail("split kinds: bool, enum, eq");
      if (node->kind != SplitNode::Kind::eq_split && node->subject.empty())
        fail("split needs a subject");
      while (!stack.empty() && stack.back().depth >= depth) stack.pop_back();
      SplitNode* raw = node.get();
      if (stack.empty()) {
        if (depth != 1) fail("nested split without an enclosing case");
        if (cur->tree) fail("plan entry already has a root split");
        cur->tree = std::move(node);
      } else {
        if (stack.back().depth != depth - 2 || !stack.back().cse)
          fail("nested split must sit under a case of the enclosing split");
        if (stack.back().cse->child) fail("case already has a nested split");
        stack.back().cse->child = std::move(node);
      }
      stack.push_back(OpenSplit{raw, depth, nullptr});
      continue;
    }
    if (word == "case") {
      while (!stack.empty() && stack.back().depth != depth - 1) stack.pop_back();
      if (stack.empty()) fail("case must sit under a split");
      std::string label;
      ls >> label;
      if (label.empty()) fail("missing case label");
      stack.back().node->cases.push_back(SplitCase{label, {}, nullptr});
      stack.back().cse = &stack.back().node->cases.back();
      continue;
    }
    if (word == "hyp") {
      while (!stack.empty() && stack.back().depth > depth - 2) stack.pop_back();
      if (stack.empty() || stack.back().depth != depth - 2 || !stack.back().cse)
        fail("hyp must sit under a case");
      if (stack.back().node->kind != SplitNode::Kind::eq_split)
        fail("hyp lines belong to eq splits");
      std::string h = rest_of();
      if (h.empty()) fail("empty hypothesis");
      stack.back().cse->hyp_texts.push_back(h);
      continue;
    }
    fail("expected split, case or hyp");
  }
  if (plan.steps.empty()) throw PlanSyntax(path + ": empty plan");
  return plan;
}

// ---------------------------------------------------------------------------
// Running a plan

struct PassageOutcome {
  std::string id;
  std::string goal;
  VerdictKind verdict = VerdictKind::stuck;
  long steps = 0;
  bool ok = false;
  std::string residual;  // printed normal form when stuck
};

struct PlanReport {
  std::string plan;
  std::vector<PassageOutcome> outcomes;
  std::vector<std::string> assumptions;  // eq-split justifications in use
  int proved = 0, refuted = 0, stuck = 0, exhausted = 0;
  bool pass = false;

  void count(const PassageOutcome& o) {
    switch (o.verdict) {
      case VerdictKind::proved: ++proved; break;
      case VerdictKind::refuted: ++refuted; break;
      case VerdictKind::stuck: ++stuck; break;
      case VerdictKind::exhausted: ++exhausted; break;
    }
  }

  std::string text() const {
    std::ostringstream os;
    os << "plan " << plan << "\n";
    std::size_t idw = 7;
    for (const auto& o : outcomes) idw = std::max(idw, o.id.size());
    for (const auto& o : outcomes) {
      os << "  " << o.id << std::string(idw - o.id.size() + 2, ' ') << verdict_name(o.verdict)
         << (o.ok ? "" : " (!)") << "  " << o.steps << " steps";
      if (!o.residual.empty()) {
        std::string r = o.residual;
        if (r.size() > 60) r = r.substr(0, 57) + "...";
        os << "  residual: " << r;
      }
      os << "\n";
    }
    if (!assumptions.empty()) {
      os << "assumed case completeness:\n";
      for (const auto& a : assumptions) os << "  " << a << "\n";
    }
    os << "passages: " << outcomes.size() << "  proved: " << proved << "  refuted: " << refuted
       << "  stuck: " << stuck << "  exhausted: " << exhausted << "\n";
    os << (pass ? "PASS" : "FAIL") << "\n";
    return os.str();
  }

  nlohmann::json json() const {
    nlohmann::json j;
    j["plan"] = plan;
    j["pass"] = pass;
    j["counts"] = {{"passages", outcomes.size()},
                   {"proved", proved},
                   {"refuted", refuted},
                   {"stuck", stuck},
                   {"exhausted", exhausted}};
    j["assumptions"] = assumptions;
    j["passages"] = nlohmann::json::array();
    for (const auto& o : outcomes) {
      nlohmann::json p = {{"id", o.id},
                          {"goal", o.goal},
                          {"verdict", verdict_name(o.verdict)},
                          {"steps", o.steps},
                          {"ok", o.ok}};
      if (!o.residual.empty()) p["residual"] = o.residual;
      j["passages"].push_back(std::move(p));
    }
    return j;
  }
};

namespace detail {

inline void collect_app_names(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == Term::Kind::App) {
    out.insert(t->name);
    for (const auto& a : t->args) collect_app_names(a, out);
  } else if (t->kind != Term::Kind::Var) {
    return;
  }
}

inline const char* kTransitions[] = {"tick", "go", "stop", "in", "out", "change"};

}  // namespace detail

class PlanRunner {
public:
  PlanRunner(ModuleRegistry& reg, long budget = 1000000, bool memo = true)
      : reg_(reg), budget_(budget), memo_(memo) {}

  PlanReport run(const Plan& plan) {
    PlanReport rep;
    rep.plan = plan.name.empty() ? "(unnamed)" : plan.name;
    bool all_ok = true;
    bool have_basis = false;
    std::set<std::string> basis_invs;
    std::map<std::string, std::set<std::string>> step_isteps;
    std::map<std::string, bool> lemma_pass;

    for (const auto& st : plan.steps) {
      Script sc = reg_.load_file(plan.dir.empty() ? st.file : plan.dir + "/" + st.file);
      std::vector<const OpenBlock*> blocks;
      for (const auto& item : sc.items)
        if (const OpenBlock* ob = std::get_if<OpenBlock>(&item)) blocks.push_back(ob);

      if (st.kind == PlanStep::Kind::lemma) {
        all_ok &= run_lemma(st, blocks, rep, lemma_pass);
        continue;
      }
      if (blocks.size() != 1)
        throw PlanSyntax(st.file + ": expected exactly one open block, found " +
                         std::to_string(blocks.size()));
      Passage root = make_passage(reg_, *blocks[0]);
      if (root.goals.empty()) throw PlanSyntax(st.file + ": passage has no goal");

      std::set<std::string> names;
      for (const auto& g : root.goals) detail::collect_app_names(g.term, names);
      // a goal citing a lemma is only as good as the lemma's own proof
      for (const auto& n : names) {
        auto it = lemma_pass.find(n);
        if (it != lemma_pass.end() && !it->second)
          throw IncompletePlan(st.file + ": goal cites " + n + " whose proof did not pass");
      }
      if (names.count("lemma1") && !lemma_pass.count("lemma1"))
        throw IncompletePlan(st.file + ": goal cites lemma1 before any lemma1 entry");

      if (st.kind == PlanStep::Kind::basis) {
        have_basis = true;
        for (int k = 1; k <= 7; ++k) {
          std::string inv = "inv" + std::to_string(k);
          if (names.count(inv)) basis_invs.insert(inv);
        }
      } else {
        std::string trans = transition_of(root, st);
        for (int k = 1; k <= 7; ++k) {
          std::string is = "istep" + std::to_string(k);
          if (names.count(is)) step_isteps[trans].insert(is);
        }
      }
      all_ok &= run_tree(root, st.tree.get(), st.name, rep);
    }

    check_coverage(have_basis, basis_invs, step_isteps);
    for (const auto& [name, ok] : lemma_pass) all_ok &= ok;
    rep.pass = all_ok;
    return rep;
  }

private:
  ModuleRegistry& reg_;
  long budget_;
  bool memo_;

  static std::string transition_of(const Passage& root, const PlanStep& st) {
    for (const auto& e : root.mod.eqs) {
      if (e.layer != 1) continue;
      if (e.lhs->kind == Term::Kind::App && e.lhs->name == "s'" && e.lhs->args.empty() &&
          e.rhs->kind == Term::Kind::App) {
        for (const char* t : detail::kTransitions)
          if (e.rhs->name == t) {
            if (st.name != t)
              throw PlanSyntax(st.file + ": declared step '" + st.name +
                               "' but s' steps by '" + e.rhs->name + "'");
            return e.rhs->name;
          }
      }
    }
    throw IncompletePlan(st.file + ": no hypothesis 's' = <transition>(...)' found");
  }

  void check_coverage(bool have_basis, const std::set<std::string>& basis_invs,
                      const std::map<std::string, std::set<std::string>>& step_isteps) {
    std::string missing;
    if (!have_basis) missing += " basis";
    else
      for (int k = 1; k <= 7; ++k)
        if (!basis_invs.count("inv" + std::to_string(k)))
          missing += " basis:inv" + std::to_string(k);
    for (const char* t : detail::kTransitions) {
      auto it = step_isteps.find(t);
      if (it == step_isteps.end()) {
        missing += std::string(" ") + t;
        continue;
      }
      for (int k = 1; k <= 7; ++k)
        if (!it->second.count("istep" + std::to_string(k)))
          missing += std::string(" ") + t + ":istep" + std::to_string(k);
    }
    if (!missing.empty()) throw IncompletePlan("uncovered:" + missing);
  }

  bool run_lemma(const PlanStep& st, const std::vector<const OpenBlock*>& blocks,
                 PlanReport& rep, std::map<std::string, bool>& lemma_pass) {
    // structural induction over the set sort: empty set, a lone pid (same as
    // or different from the observed one), and a pid joined to a smaller set
    static const std::vector<std::string> required = {"nil", "single-eq", "single-neq",
                                                      "cons-eq", "cons-neq"};
    if (st.lemma_cases != required) {
      std::string want;
      for (const auto& c : required) want += (want.empty() ? "" : ", ") + c;
      throw IncompletePlan(st.file + ": structural lemma needs cases: " + want);
    }
    if (blocks.size() != st.lemma_cases.size())
      throw PlanSyntax(st.file + ": " + std::to_string(st.lemma_cases.size()) +
                       " cases declared but " + std::to_string(blocks.size()) + " open blocks");
    bool ok = true;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      Passage p = make_passage(reg_, *blocks[i]);
      if (p.goals.empty()) throw PlanSyntax(st.file + ": case " + st.lemma_cases[i] + " has no goal");
      ok &= run_goals(p, st.name + "/" + st.lemma_cases[i], rep);
    }
    lemma_pass[st.name] = ok;
    return ok;
  }

  bool run_goals(const Passage& p, const std::string& id, PlanReport& rep) {
    bool ok = true;
    for (std::size_t i = 0; i < p.goals.size(); ++i) {
      const auto& g = p.goals[i];
      Verdict v = run_goal(p.mod, g.term, budget_, memo_);
      PassageOutcome o;
      o.id = p.goals.size() > 1 ? id + "#" + std::to_string(i + 1) : id;
      o.goal = print_term(g.term);
      o.verdict = v.kind;
      o.steps = v.steps;
      o.ok = verdict_ok(g.mode, v.kind);
      if (v.residual) o.residual = print_term(v.residual);
      rep.count(o);
      ok &= o.ok;
      rep.outcomes.push_back(std::move(o));
    }
    return ok;
  }

  bool run_tree(const Passage& p, const SplitNode* node, const std::string& id, PlanReport& rep) {
    if (!node) return run_goals(p, id, rep);
    if (node->kind == SplitNode::Kind::eq_split)
      rep.assumptions.push_back(id + ": " + node->justification);
    std::vector<Branch> branches = split_cases(p.mod, p.vars, *node);
    bool ok = true;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      Passage q{std::move(branches[i].mod), p.vars, p.goals};
      ok &= run_tree(q, node->cases[i].child.get(), id + "/" + branches[i].label, rep);
    }
    return ok;
  }
};

inline int run_prove_cli(const std::string& plan_path, const std::vector<std::string>& dirs,
                         long budget, bool no_memo, const std::string& format) {
  try {
    ModuleRegistry reg;
    reg.search_dirs = dirs;
    std::string pd = dir_of(plan_path);
    if (std::find(reg.search_dirs.begin(), reg.search_dirs.end(), pd) == reg.search_dirs.end())
      reg.search_dirs.push_back(pd);
    Plan plan = parse_plan(plan_path);
    PlanRunner runner(reg, budget, !no_memo);
    PlanReport rep = runner.run(plan);
    if (format == "json") std::cout << rep.json().dump(2) << "\n";
    else std::cout << rep.text();
    return rep.pass ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "prove: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace osr
