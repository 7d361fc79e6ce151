#pragma once

// Leftmost-innermost conditional rewriting.
//
// Each root step tries builtin evaluation first (rational folding, literal
// comparisons, equality, if selection, boolean-ring normalization at
// connective heads), then user equations: higher layers first, textual order
// within a layer, first successful match wins. Matches against a flat
// associative node may cover a proper sub-multiset; the remainder is carried
// over, so x + t - x collapses through the cancellation rule. Conditions are
// normalized recursively and must reach the literal true; every root step
// spends shared budget, and exhausting it raises BudgetExhausted.
//
// A condition may rewrite into a term that triggers the same rule on the same
// subject (lemmas whose condition contains their own instance do this). Such a
// derivation has no well-founded justification, so an in-flight check skips a
// rule whose condition evaluation would re-enter it on an equal subject. A
// depth cap backstops against mutual recursion that grows the subject.

#include <map>
#include <set>
#include <vector>

#include "bool_ring.hpp"
#include "match.hpp"
#include "term.hpp"

namespace osr {

struct BudgetExhausted : std::runtime_error {
  BudgetExhausted() : std::runtime_error("rewrite budget exhausted") {}
};

struct RewriteStats {
  long steps = 0;
  long memo_hits = 0;
};

class RewriteContext {
public:
  explicit RewriteContext(const FlatModule& m, long budget = 1000000, bool use_memo = true)
      : m_(m), matcher_(m), budget_limit_(budget), use_memo_(use_memo) {
    for (const auto& eq : m.eqs) rules_.push_back(&eq);
    std::stable_sort(rules_.begin(), rules_.end(),
                     [](const Equation* a, const Equation* b) { return a->layer > b->layer; });
    for (const Equation* r : rules_) by_head_[r->lhs->name].push_back(r);
  }

  const FlatModule& module() const { return m_; }
  const RewriteStats& stats() const { return stats_; }

  TermPtr reduce(const TermPtr& t) {
    remaining_ = budget_limit_;
    depth_ = 0;
    cond_stack_.clear();
    return normalize(ac_flatten(t, m_));
  }

private:
  const FlatModule& m_;
  Matcher matcher_;
  long budget_limit_;
  long remaining_ = 0;
  bool use_memo_;
  RewriteStats stats_;
  std::vector<const Equation*> rules_;
  std::map<std::string, std::vector<const Equation*>> by_head_;
  std::set<TermPtr, TermLess> nf_set_;
  std::map<TermPtr, TermPtr, TermLess> memo_;
  std::vector<std::pair<const Equation*, TermPtr>> cond_stack_;
  int depth_ = 0;
  static constexpr int max_depth = 3000;

  bool cond_in_flight(const Equation* r, const TermPtr& t) const {
    for (const auto& [rule, subj] : cond_stack_)
      if (rule == r && term_eq(subj, t)) return true;
    return false;
  }

  struct CondScope {
    std::vector<std::pair<const Equation*, TermPtr>>& stack;
    ~CondScope() { stack.pop_back(); }
  };

  struct DepthScope {
    int& depth;
    explicit DepthScope(int& d) : depth(d) {
      if (++depth > max_depth) {
        --depth;
        throw BudgetExhausted();
      }
    }
    ~DepthScope() { --depth; }
  };

  void spend() {
    ++stats_.steps;
    if (--remaining_ < 0) throw BudgetExhausted();
  }

  TermPtr normalize(TermPtr t) {
    if (t->kind != Term::Kind::App) return t;
    if (nf_set_.count(t)) return t;
    DepthScope guard(depth_);
    TermPtr memo_key;
    while (t->kind == Term::Kind::App) {
      t = normalize_children(t);
      if (t->kind != Term::Kind::App) break;
      if (use_memo_ && !memo_key && op_attrs(m_, t->name, (int)t->args.size()).memo) {
        memo_key = t;
        auto it = memo_.find(t);
        if (it != memo_.end()) {
          ++stats_.memo_hits;
          return it->second;
        }
      }
      TermPtr r = root_step(t);
      if (!r) break;
      spend();
      t = ac_flatten(r, m_);
    }
    nf_set_.insert(t);
    if (memo_key) memo_.emplace(memo_key, t);
    return t;
  }

  TermPtr normalize_children(const TermPtr& t) {
    bool changed = false;
    std::vector<TermPtr> kids;
    kids.reserve(t->args.size());
    for (const auto& a : t->args) {
      TermPtr na = normalize(a);
      changed = changed || na.get() != a.get();
      kids.push_back(std::move(na));
    }
    if (!changed) return t;
    return ac_flatten(Term::app(t->name, std::move(kids)), m_);
  }

  TermPtr root_step(const TermPtr& t) {
    if (TermPtr b = builtin_step(t)) return b;
    auto it = by_head_.find(t->name);
    if (it == by_head_.end()) return nullptr;
    for (const Equation* r : it->second) {
      if (r->cond && cond_in_flight(r, t)) continue;
      for (const MatchResult& cand : matcher_.match_extend(r->lhs, t)) {
        if (r->cond) {
          cond_stack_.emplace_back(r, t);
          CondScope scope{cond_stack_};
          TermPtr c = normalize(apply_substitution(cand.sigma, r->cond, m_));
          if (!(c->kind == Term::Kind::Bool && c->b)) continue;
        }
        TermPtr rhs = apply_substitution(cand.sigma, r->rhs, m_);
        if (!cand.remainder.empty()) {
          std::vector<TermPtr> kids = cand.remainder;
          kids.push_back(rhs);
          rhs = ac_flatten(Term::app(t->name, std::move(kids)), m_);
        }
        return rhs;
      }
    }
    return nullptr;
  }

  static bool is_rat(const TermPtr& t) { return t->kind == Term::Kind::Rat; }
  static bool is_bool(const TermPtr& t) { return t->kind == Term::Kind::Bool; }

  TermPtr builtin_step(const TermPtr& t) {
    const std::string& n = t->name;
    std::size_t argc = t->args.size();
    if (n == "_+_" && argc >= 2) {
      // literal children sort first; fold them, dropping a zero among others
      std::size_t k = 0;
      Rational sum;
      while (k < argc && is_rat(t->args[k])) sum = sum + t->args[k++]->rat;
      if (k == argc) return Term::rat_lit(sum);
      if (k >= 2 || (k == 1 && sum.is_zero())) {
        std::vector<TermPtr> kids;
        if (!sum.is_zero()) kids.push_back(Term::rat_lit(sum));
        kids.insert(kids.end(), t->args.begin() + k, t->args.end());
        if (kids.size() == 1) return kids[0];
        return ac_flatten(Term::app("_+_", std::move(kids)), m_);
      }
      return nullptr;
    }
    if (n == "-_" && argc == 1 && is_rat(t->args[0]))
      return Term::rat_lit(-t->args[0]->rat);
    if ((n == "_<=_" || n == "_<_") && argc == 2 && is_rat(t->args[0]) && is_rat(t->args[1])) {
      const Rational &a = t->args[0]->rat, &b = t->args[1]->rat;
      return Term::bool_lit(n == "_<=_" ? a <= b : a < b);
    }
    if (n == "_=_" && argc == 2) {
      const TermPtr &a = t->args[0], &b = t->args[1];
      if (term_eq(a, b)) return Term::bool_lit(true);
      if (is_rat(a) && is_rat(b)) return Term::bool_lit(false);
      if (is_bool(a) && is_bool(b)) return Term::bool_lit(false);
      if (a->kind == Term::Kind::App && b->kind == Term::Kind::App && a->args.empty() &&
          b->args.empty() && a->name != b->name) {
        const Operator* oa = m_.find_op(a->name, 0);
        const Operator* ob = m_.find_op(b->name, 0);
        if (oa && ob && oa->tight_const && ob->tight_const &&
            m_.sorts_connected(oa->coarity, ob->coarity))
          return Term::bool_lit(false);
      }
      return nullptr;
    }
    if (n == "if_then_else_fi" && argc == 3 && is_bool(t->args[0]))
      return t->args[0]->b ? t->args[1] : t->args[2];
    if (is_connective(n, argc)) {
      TermPtr b = bool_normalize(t, m_);
      if (!term_eq(b, t)) return b;
      return nullptr;
    }
    return nullptr;
  }
};

}  // namespace osr
