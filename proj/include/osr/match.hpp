#pragma once

// Matching modulo {assoc, comm, idem} operator attributes.
//
// Subjects are ground and ac-flattened. For idempotent flat operators a
// variable may bind any nonempty sub-multiset and pattern positions may
// overlap (the same subject element can satisfy two pattern children), as
// long as the images jointly cover the subject. For plain AC operators the
// children form an exact multiset partition, except when the caller asks for
// an extension match (sub-multiset plus remainder), which rule application
// at flat nodes needs.

#include <functional>
#include <map>
#include <vector>

#include "term.hpp"

namespace osr {

struct Substitution {
  std::map<std::string, TermPtr> bind;

  const TermPtr* lookup(const std::string& v) const {
    auto it = bind.find(v);
    return it == bind.end() ? nullptr : &it->second;
  }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& kv : bind) n += term_size(kv.second);
    return n;
  }
};

inline int subst_cmp(const Substitution& a, const Substitution& b) {
  std::size_t sa = a.total_size(), sb = b.total_size();
  if (sa != sb) return sa < sb ? -1 : 1;
  auto ia = a.bind.begin(), ib = b.bind.begin();
  for (; ia != a.bind.end() && ib != b.bind.end(); ++ia, ++ib) {
    if (int c = ia->first.compare(ib->first)) return c < 0 ? -1 : 1;
    if (int c = term_cmp(ia->second, ib->second)) return c;
  }
  if (a.bind.size() != b.bind.size()) return a.bind.size() < b.bind.size() ? -1 : 1;
  return 0;
}

inline TermPtr apply_substitution(const Substitution& s, const TermPtr& t, const FlatModule& m) {
  std::function<TermPtr(const TermPtr&)> go = [&](const TermPtr& u) -> TermPtr {
    switch (u->kind) {
      case Term::Kind::Var: {
        const TermPtr* b = s.lookup(u->name);
        return b ? *b : u;
      }
      case Term::Kind::App: {
        std::vector<TermPtr> as;
        as.reserve(u->args.size());
        for (const auto& a : u->args) as.push_back(go(a));
        return Term::app(u->name, std::move(as));
      }
      default:
        return u;
    }
  };
  return ac_flatten(go(t), m);
}

struct MatchResult {
  Substitution sigma;
  std::vector<TermPtr> remainder;  // unmatched flat children (extension matches only)
};

class Matcher {
public:
  explicit Matcher(const FlatModule& m) : m_(m) {}

  // All substitutions with ac_flatten(sigma(pattern)) == subject, deduplicated,
  // ordered by (total binding size, lexicographic bindings).
  std::vector<Substitution> match(const TermPtr& pattern, const TermPtr& subject) {
    std::vector<MatchResult> rs = match_internal(pattern, subject, false);
    std::vector<Substitution> out;
    out.reserve(rs.size());
    for (auto& r : rs) out.push_back(std::move(r.sigma));
    return out;
  }

  // Extension variant for rule application: when both pattern and subject are
  // flat nodes of the same plain-AC operator, the pattern may cover a proper
  // sub-multiset; leftover children are reported as the remainder. Exact
  // matches sort first.
  std::vector<MatchResult> match_extend(const TermPtr& pattern, const TermPtr& subject) {
    return match_internal(pattern, subject, true);
  }

private:
  const FlatModule& m_;

  using Cont = std::function<void(const Substitution&)>;

  std::vector<MatchResult> match_internal(const TermPtr& pattern, const TermPtr& subject,
                                          bool allow_rem) {
    std::vector<MatchResult> out;
    bool extendable = allow_rem && pattern->kind == Term::Kind::App &&
                      subject->kind == Term::Kind::App && pattern->name == subject->name;
    OpAttrs attrs = op_attrs(m_, pattern->name, (int)pattern->args.size());
    if (extendable && attrs.assoc && !attrs.idem && subject->args.size() > 2) {
      // enumerate sub-multisets of the subject children for the pattern to cover
      const auto& elems = subject->args;
      std::size_t n = elems.size();
      for (std::size_t mask = 1; mask < ((std::size_t)1 << n); ++mask) {
        std::vector<TermPtr> covered, rest;
        for (std::size_t i = 0; i < n; ++i)
          ((mask >> i) & 1 ? covered : rest).push_back(elems[i]);
        if (covered.size() < 2) continue;  // a flat pattern needs >= 2 children
        TermPtr sub = covered.size() == elems.size()
                          ? subject
                          : ac_flatten(Term::app(subject->name, covered), m_);
        go(pattern, sub, Substitution{}, [&](const Substitution& s) {
          out.push_back(MatchResult{s, rest});
        });
      }
    } else {
      go(pattern, subject, Substitution{}, [&](const Substitution& s) {
        out.push_back(MatchResult{s, {}});
      });
    }
    std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
      if (a.remainder.size() != b.remainder.size()) return a.remainder.size() < b.remainder.size();
      return subst_cmp(a.sigma, b.sigma) < 0;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const MatchResult& a, const MatchResult& b) {
                            if (a.remainder.size() != b.remainder.size()) return false;
                            for (std::size_t i = 0; i < a.remainder.size(); ++i)
                              if (!term_eq(a.remainder[i], b.remainder[i])) return false;
                            return subst_cmp(a.sigma, b.sigma) == 0;
                          }),
              out.end());
    return out;
  }

  void go(const TermPtr& p, const TermPtr& s, const Substitution& sigma, const Cont& k) {
    switch (p->kind) {
      case Term::Kind::Var: {
        if (const TermPtr* b = sigma.lookup(p->name)) {
          if (term_eq(*b, s)) k(sigma);
          return;
        }
        std::string ls;
        try {
          ls = least_sort(s, m_);
        } catch (const std::exception&) {
          return;
        }
        if (!m_.sort_le(ls, p->var_sort)) return;
        Substitution ext = sigma;
        ext.bind[p->name] = s;
        k(ext);
        return;
      }
      case Term::Kind::Rat:
        if (s->kind == Term::Kind::Rat && s->rat == p->rat) k(sigma);
        return;
      case Term::Kind::Bool:
        if (s->kind == Term::Kind::Bool && s->b == p->b) k(sigma);
        return;
      case Term::Kind::App:
        break;
    }

    OpAttrs attrs = op_attrs(m_, p->name, (int)p->args.size());
    if (attrs.assoc) {
      // subject element list: same-head children, or the subject itself
      std::vector<TermPtr> elems;
      if (s->kind == Term::Kind::App && s->name == p->name)
        elems = s->args;
      else
        elems = {s};
      ac_match(p->args, elems, attrs.idem, p->name, sigma, k);
      return;
    }
    if (s->kind != Term::Kind::App || s->name != p->name || s->args.size() != p->args.size())
      return;
    if (attrs.comm && p->args.size() == 2) {
      seq_match(p->args, {s->args[0], s->args[1]}, 0, sigma, k);
      seq_match(p->args, {s->args[1], s->args[0]}, 0, sigma, k);
      return;
    }
    seq_match(p->args, s->args, 0, sigma, k);
  }

  void seq_match(const std::vector<TermPtr>& ps, const std::vector<TermPtr>& ss, std::size_t i,
                 const Substitution& sigma, const Cont& k) {
    if (i == ps.size()) {
      k(sigma);
      return;
    }
    go(ps[i], ss[i], sigma, [&](const Substitution& ext) { seq_match(ps, ss, i + 1, ext, k); });
  }

  TermPtr flat_of(const std::string& opname, const std::vector<TermPtr>& elems) {
    if (elems.size() == 1) return elems[0];
    return ac_flatten(Term::app(opname, elems), m_);
  }

  void ac_match(const std::vector<TermPtr>& pats, const std::vector<TermPtr>& elems, bool idem,
                const std::string& opname, const Substitution& sigma, const Cont& k) {
    std::vector<TermPtr> nv, vars;
    for (const auto& p : pats)
      (p->kind == Term::Kind::Var ? vars : nv).push_back(p);

    if (idem) {
      std::vector<bool> covered(elems.size(), false);
      ac_idem_nv(nv, 0, elems, covered, vars, opname, sigma, k);
    } else {
      if (elems.size() < pats.size()) return;
      std::vector<bool> used(elems.size(), false);
      ac_part_nv(nv, 0, elems, used, vars, opname, sigma, k);
    }
  }

  // --- idempotent flat matching: overlapping images, coverage check at the end

  void ac_idem_nv(const std::vector<TermPtr>& nv, std::size_t i, const std::vector<TermPtr>& elems,
                  std::vector<bool> covered, const std::vector<TermPtr>& vars,
                  const std::string& opname, const Substitution& sigma, const Cont& k) {
    if (i == nv.size()) {
      ac_idem_vars(vars, 0, elems, covered, opname, sigma, k);
      return;
    }
    for (std::size_t j = 0; j < elems.size(); ++j) {
      std::vector<bool> cov = covered;
      cov[j] = true;
      go(nv[i], elems[j], sigma,
         [&](const Substitution& ext) { ac_idem_nv(nv, i + 1, elems, cov, vars, opname, ext, k); });
    }
  }

  void ac_idem_vars(const std::vector<TermPtr>& vars, std::size_t i,
                    const std::vector<TermPtr>& elems, std::vector<bool> covered,
                    const std::string& opname, const Substitution& sigma, const Cont& k) {
    if (i == vars.size()) {
      for (bool c : covered)
        if (!c) return;
      k(sigma);
      return;
    }
    std::size_t n = elems.size();
    for (std::size_t mask = 1; mask < ((std::size_t)1 << n); ++mask) {
      std::vector<TermPtr> image;
      std::vector<bool> cov = covered;
      for (std::size_t j = 0; j < n; ++j)
        if ((mask >> j) & 1) {
          image.push_back(elems[j]);
          cov[j] = true;
        }
      go(vars[i], flat_of(opname, image), sigma,
         [&](const Substitution& ext) { ac_idem_vars(vars, i + 1, elems, cov, opname, ext, k); });
    }
  }

  // --- plain AC: exact multiset partition

  void ac_part_nv(const std::vector<TermPtr>& nv, std::size_t i, const std::vector<TermPtr>& elems,
                  std::vector<bool> used, const std::vector<TermPtr>& vars,
                  const std::string& opname, const Substitution& sigma, const Cont& k) {
    if (i == nv.size()) {
      ac_part_vars(vars, 0, elems, used, opname, sigma, k);
      return;
    }
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (used[j]) continue;
      std::vector<bool> u = used;
      u[j] = true;
      go(nv[i], elems[j], sigma,
         [&](const Substitution& ext) { ac_part_nv(nv, i + 1, elems, u, vars, opname, ext, k); });
    }
  }

  void ac_part_vars(const std::vector<TermPtr>& vars, std::size_t i,
                    const std::vector<TermPtr>& elems, std::vector<bool> used,
                    const std::string& opname, const Substitution& sigma, const Cont& k) {
    if (i == vars.size()) {
      for (bool u : used)
        if (!u) return;
      k(sigma);
      return;
    }
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (!used[j]) free.push_back(j);
    std::size_t n = free.size();
    if (n == 0) return;
    for (std::size_t mask = 1; mask < ((std::size_t)1 << n); ++mask) {
      std::vector<TermPtr> image;
      std::vector<bool> u = used;
      for (std::size_t j = 0; j < n; ++j)
        if ((mask >> j) & 1) {
          image.push_back(elems[free[j]]);
          u[free[j]] = true;
        }
      go(vars[i], flat_of(opname, image), sigma,
         [&](const Substitution& ext) { ac_part_vars(vars, i + 1, elems, u, opname, ext, k); });
    }
  }
};

// Convenience wrapper matching the library-level operation.
inline std::vector<Substitution> match(const TermPtr& pattern, const TermPtr& subject,
                                       const FlatModule& m) {
  Matcher mm(m);
  return mm.match(pattern, subject);
}

}  // namespace osr
