#pragma once

// Order-sorted signatures and terms.
//
// Flat modules hold the reflexive-transitive subsort closure and all operators
// keyed by (name, argc). Associative operators use variadic "flat" nodes after
// ac_flatten; commutative arguments are kept in a fixed total term order so
// structural equality doubles as equality modulo comm.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace osr {

struct UnknownOperator : std::runtime_error {
  explicit UnknownOperator(const std::string& m) : std::runtime_error("unknown operator: " + m) {}
};
struct SortMismatch : std::runtime_error {
  explicit SortMismatch(const std::string& m) : std::runtime_error("sort mismatch: " + m) {}
};

struct SortDecl {
  std::string name;
  bool hidden = false;  // declared *[S]*; annotation only
};

struct OpAttrs {
  bool assoc = false;
  bool comm = false;
  bool idem = false;
  bool memo = false;
};

struct Operator {
  std::string name;  // mixfix pattern, e.g. "_in_", "_ _", "next"
  std::vector<std::string> arity;
  std::string coarity;
  OpAttrs attrs;
  bool behavioral = false;  // declared bop; annotation only
  bool poly = false;        // builtin polymorphic (_=_, if_then_else_fi)
  bool tight_const = false;  // constant of an initial-denotation module; distinct such
                             // constants of connected sorts are provably unequal
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, App, Rat, Bool };

  Kind kind;
  std::string name;           // Var: variable name; App: operator name
  std::string var_sort;       // Var only
  std::vector<TermPtr> args;  // App only; >2 children marks an AC flat node
  Rational rat;               // Rat only
  bool b = false;             // Bool only

  static TermPtr var(std::string n, std::string sort) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Var;
    t->name = std::move(n);
    t->var_sort = std::move(sort);
    return t;
  }
  static TermPtr app(std::string op, std::vector<TermPtr> as = {}) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::App;
    t->name = std::move(op);
    t->args = std::move(as);
    return t;
  }
  static TermPtr rat_lit(const Rational& r) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Rat;
    t->rat = r;
    return t;
  }
  static TermPtr bool_lit(bool v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Bool;
    t->b = v;
    return t;
  }
};

// Fixed total order: literals first (Rat, then Bool), then variables, then
// applications ordered by (name, argc, argument order, lexicographically).
inline int term_cmp(const TermPtr& a, const TermPtr& b) {
  auto rank = [](const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Rat: return 0;
      case Term::Kind::Bool: return 1;
      case Term::Kind::Var: return 2;
      case Term::Kind::App: return 3;
    }
    return 4;
  };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case Term::Kind::Rat: {
      if (a->rat == b->rat) return 0;
      return a->rat < b->rat ? -1 : 1;
    }
    case Term::Kind::Bool: {
      if (a->b == b->b) return 0;
      return !a->b ? -1 : 1;
    }
    case Term::Kind::Var: {
      if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
      if (int c = a->var_sort.compare(b->var_sort)) return c < 0 ? -1 : 1;
      return 0;
    }
    case Term::Kind::App: {
      if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (int c = term_cmp(a->args[i], b->args[i])) return c;
      return 0;
    }
  }
  return 0;
}

inline bool term_eq(const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) == 0; }

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_cmp(a, b) < 0; }
};

inline void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == Term::Kind::Var) out.insert(t->name);
  for (const auto& a : t->args) collect_vars(a, out);
}

inline std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& a : t->args) n += term_size(a);
  return n;
}

struct Equation {
  TermPtr lhs, rhs;
  TermPtr cond;  // null for unconditional
  std::string label;
  int layer = 0;  // equations of higher layers (open blocks, hypotheses) are tried first
};

using OpKey = std::pair<std::string, int>;

struct FlatModule {
  std::string name;
  std::map<std::string, SortDecl> sorts;
  std::set<std::string> tight_sorts;
  std::set<std::pair<std::string, std::string>> sub_le;  // reflexive-transitive (lower, upper)
  std::map<OpKey, Operator> ops;
  std::vector<OpKey> op_order;  // declaration order, for printing and enum splits
  std::vector<Equation> eqs;

  void add_sort(const std::string& s, bool hidden = false, bool tight = false) {
    if (!sorts.count(s)) sorts[s] = SortDecl{s, hidden};
    if (tight) tight_sorts.insert(s);
    sub_le.insert({s, s});
  }

  void add_subsort(const std::string& lo, const std::string& hi) {
    add_sort(lo);
    add_sort(hi);
    sub_le.insert({lo, hi});
    close_subsorts();
    for (const auto& p : sub_le)
      if (p.first != p.second && sub_le.count({p.second, p.first}))
        throw SortMismatch("subsort cycle between " + p.first + " and " + p.second);
  }

  void close_subsorts() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::pair<std::string, std::string>> add;
      for (const auto& ab : sub_le)
        for (const auto& bc : sub_le)
          if (ab.second == bc.first && !sub_le.count({ab.first, bc.second}))
            add.push_back({ab.first, bc.second});
      for (auto& p : add) {
        sub_le.insert(p);
        changed = true;
      }
    }
  }

  bool sort_le(const std::string& a, const std::string& b) const {
    return a == b || sub_le.count({a, b}) > 0;
  }

  bool sorts_connected(const std::string& a, const std::string& b) const {
    if (sort_le(a, b) || sort_le(b, a)) return true;
    for (const auto& s : sorts)
      if (sort_le(a, s.first) && sort_le(b, s.first)) return true;
    return false;
  }

  // Least common supersort, used for if_then_else_fi result sorts.
  std::optional<std::string> least_upper(const std::string& a, const std::string& b) const {
    if (sort_le(a, b)) return b;
    if (sort_le(b, a)) return a;
    std::optional<std::string> best;
    for (const auto& s : sorts) {
      if (!sort_le(a, s.first) || !sort_le(b, s.first)) continue;
      if (!best || sort_le(s.first, *best)) best = s.first;
    }
    return best;
  }

  void add_op(const Operator& op, bool allow_redeclare = true) {
    OpKey key{op.name, (int)op.arity.size()};
    auto it = ops.find(key);
    if (it != ops.end()) {
      if (!allow_redeclare && it->second.coarity != op.coarity)
        throw SortMismatch("operator " + op.name + " redeclared with different coarity");
      return;  // same symbol re-imported or subsort-lifted variant; keep first
    }
    ops[key] = op;
    op_order.push_back(key);
  }

  const Operator* find_op(const std::string& n, int argc) const {
    auto it = ops.find({n, argc});
    if (it != ops.end()) return &it->second;
    if (argc > 2) {  // flat node of a binary assoc operator
      it = ops.find({n, 2});
      if (it != ops.end() && it->second.attrs.assoc) return &it->second;
    }
    return nullptr;
  }

  // Tight constants of exactly this sort, in declaration order. Loose
  // constants added by open blocks are not values and are excluded.
  std::vector<std::string> constructor_consts(const std::string& sort) const {
    std::vector<std::string> out;
    for (const auto& key : op_order) {
      const Operator& op = ops.at(key);
      if (op.arity.empty() && op.coarity == sort && op.tight_const) out.push_back(op.name);
    }
    return out;
  }
};

// Builtin signature shared by every flattened module: BOOL, RAT (with Nat),
// the polymorphic equality and if_then_else_fi.
inline void add_builtin_signature(FlatModule& m) {
  m.add_sort("Bool", false, true);
  m.add_sort("Nat", false, true);
  m.add_sort("Rat", false, true);
  m.add_subsort("Nat", "Rat");

  auto op = [&](const std::string& n, std::vector<std::string> ar, const std::string& co,
                OpAttrs a = {}, bool poly = false) {
    m.add_op(Operator{n, std::move(ar), co, a, false, poly});
  };
  op("true", {}, "Bool");
  op("false", {}, "Bool");
  op("not_", {"Bool"}, "Bool");
  op("_and_", {"Bool", "Bool"}, "Bool", OpAttrs{true, true, false, false});
  op("_xor_", {"Bool", "Bool"}, "Bool", OpAttrs{true, true, false, false});
  op("_or_", {"Bool", "Bool"}, "Bool", OpAttrs{true, true, false, false});
  op("_implies_", {"Bool", "Bool"}, "Bool");
  op("_+_", {"Rat", "Rat"}, "Rat", OpAttrs{true, true, false, false});
  op("-_", {"Rat"}, "Rat");
  op("_<=_", {"Rat", "Rat"}, "Bool");
  op("_<_", {"Rat", "Rat"}, "Bool");
  op("_=_", {}, "Bool", OpAttrs{false, true, false, false}, true);
  op("if_then_else_fi", {}, "", {}, true);
}

// Effective attributes of an application head; the polymorphic _=_ has no
// (name, 2) operator entry but is commutative everywhere.
inline OpAttrs op_attrs(const FlatModule& m, const std::string& name, int argc) {
  if (name == "_=_") {
    OpAttrs a;
    a.comm = true;
    return a;
  }
  const Operator* op = m.find_op(name, argc);
  return op ? op->attrs : OpAttrs{};
}

inline std::string least_sort(const TermPtr& t, const FlatModule& m);

inline void check_arg_sort(const TermPtr& arg, const std::string& declared, const FlatModule& m,
                           const std::string& op_name) {
  std::string ls = least_sort(arg, m);
  if (!m.sort_le(ls, declared))
    throw SortMismatch("argument of sort " + ls + " where " + declared + " expected in " + op_name);
}

inline std::string least_sort(const TermPtr& t, const FlatModule& m) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->var_sort;
    case Term::Kind::Rat:
      return t->rat.is_nonneg_integer() ? "Nat" : "Rat";
    case Term::Kind::Bool:
      return "Bool";
    case Term::Kind::App: {
      if (t->name == "_=_") {
        if (t->args.size() != 2) throw SortMismatch("_=_ expects two arguments");
        std::string a = least_sort(t->args[0], m), b = least_sort(t->args[1], m);
        if (!m.sorts_connected(a, b))
          throw SortMismatch("_=_ over unrelated sorts " + a + " and " + b);
        return "Bool";
      }
      if (t->name == "if_then_else_fi") {
        if (t->args.size() != 3) throw SortMismatch("if_then_else_fi expects three arguments");
        check_arg_sort(t->args[0], "Bool", m, "if_then_else_fi");
        std::string a = least_sort(t->args[1], m), b = least_sort(t->args[2], m);
        auto up = m.least_upper(a, b);
        if (!up) throw SortMismatch("if_then_else_fi branches of unrelated sorts");
        return *up;
      }
      const Operator* op = m.find_op(t->name, (int)t->args.size());
      if (!op) throw UnknownOperator(t->name + "/" + std::to_string(t->args.size()));
      if (t->args.size() == op->arity.size()) {
        for (std::size_t i = 0; i < t->args.size(); ++i)
          check_arg_sort(t->args[i], op->arity[i], m, op->name);
      } else {
        // flat node: all children against the (shared) binary argument sort
        for (const auto& a : t->args) check_arg_sort(a, op->arity[0], m, op->name);
      }
      return op->coarity;
    }
  }
  throw SortMismatch("unreachable term kind");
}

// Canonical form modulo declared attributes: assoc children flattened into one
// variadic node, comm children sorted, idem duplicates collapsed. Idempotent.
inline TermPtr ac_flatten(const TermPtr& t, const FlatModule& m) {
  if (t->kind != Term::Kind::App) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->args.size());
  for (const auto& a : t->args) kids.push_back(ac_flatten(a, m));

  OpAttrs attrs = op_attrs(m, t->name, (int)t->args.size());

  if (attrs.assoc) {
    std::vector<TermPtr> flat;
    for (auto& k : kids) {
      if (k->kind == Term::Kind::App && k->name == t->name)
        flat.insert(flat.end(), k->args.begin(), k->args.end());
      else
        flat.push_back(k);
    }
    kids = std::move(flat);
  }
  if (attrs.comm) std::stable_sort(kids.begin(), kids.end(), TermLess{});
  if (attrs.idem) kids.erase(std::unique(kids.begin(), kids.end(), term_eq), kids.end());
  if (attrs.assoc && kids.size() == 1) return kids[0];
  return Term::app(t->name, std::move(kids));
}

}  // namespace osr
