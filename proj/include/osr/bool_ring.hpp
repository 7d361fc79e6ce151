#pragma once

// Boolean-ring normal forms over xor/and polynomials.
//
// A polynomial is a set of monomials combined by xor; a monomial is a set of
// atoms combined by and; the empty monomial is the constant true. Working in
// GF(2) makes xor-accumulation cancel duplicate monomials and and-merging
// collapse duplicate atoms, so every propositional formula over fixed atoms
// has one canonical rendering. Atoms are the maximal subterms whose head is
// not a boolean connective.

#include <set>
#include <vector>

#include "term.hpp"

namespace osr {

using Monomial = std::vector<TermPtr>;  // atoms sorted by term_cmp, duplicates removed

inline int mono_cmp(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = term_cmp(a[i], b[i])) return c;
  return 0;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) < 0; }
};

using Polynomial = std::set<Monomial, MonoLess>;

inline Polynomial poly_zero() { return {}; }
inline Polynomial poly_one() { return {Monomial{}}; }

inline void poly_xor_mono(Polynomial& p, const Monomial& m) {
  auto it = p.find(m);
  if (it != p.end())
    p.erase(it);
  else
    p.insert(m);
}

inline Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& m : b) poly_xor_mono(r, m);
  return r;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r), TermLess{});
  r.erase(std::unique(r.begin(), r.end(), term_eq), r.end());
  return r;
}

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& ma : a)
    for (const auto& mb : b) poly_xor_mono(r, mono_mul(ma, mb));
  return r;
}

inline bool is_connective(const std::string& name, std::size_t argc) {
  if (name == "not_") return argc == 1;
  if (name == "_implies_") return argc == 2;
  if (name == "_and_" || name == "_xor_" || name == "_or_") return argc >= 2;
  return false;
}

inline Polynomial to_poly(const TermPtr& t) {
  if (t->kind == Term::Kind::Bool) return t->b ? poly_one() : poly_zero();
  if (t->kind == Term::Kind::App && is_connective(t->name, t->args.size())) {
    if (t->name == "not_") return poly_add(poly_one(), to_poly(t->args[0]));
    if (t->name == "_implies_") {
      Polynomial a = to_poly(t->args[0]), b = to_poly(t->args[1]);
      return poly_add(poly_mul(a, b), poly_add(a, poly_one()));
    }
    if (t->name == "_and_") {
      Polynomial r = poly_one();
      for (const auto& c : t->args) r = poly_mul(r, to_poly(c));
      return r;
    }
    if (t->name == "_xor_") {
      Polynomial r = poly_zero();
      for (const auto& c : t->args) r = poly_add(r, to_poly(c));
      return r;
    }
    // or: a or b = ab xor a xor b, folded left
    Polynomial r = poly_zero();
    for (const auto& c : t->args) {
      Polynomial pc = to_poly(c);
      r = poly_add(poly_mul(r, pc), poly_add(r, pc));
    }
    return r;
  }
  return Polynomial{Monomial{t}};
}

inline TermPtr from_poly(const Polynomial& p, const FlatModule& m) {
  if (p.empty()) return Term::bool_lit(false);
  std::vector<TermPtr> monos;
  monos.reserve(p.size());
  for (const auto& mono : p) {
    if (mono.empty())
      monos.push_back(Term::bool_lit(true));
    else if (mono.size() == 1)
      monos.push_back(mono[0]);
    else
      monos.push_back(ac_flatten(Term::app("_and_", {mono.begin(), mono.end()}), m));
  }
  if (monos.size() == 1) return monos[0];
  return ac_flatten(Term::app("_xor_", std::move(monos)), m);
}

// Canonicalize a term whose boolean skeleton may be reducible; leaves terms
// without connective heads untouched.
inline TermPtr bool_normalize(const TermPtr& t, const FlatModule& m) {
  if (t->kind != Term::Kind::App || !is_connective(t->name, t->args.size())) return t;
  return from_poly(to_poly(t), m);
}

}  // namespace osr
