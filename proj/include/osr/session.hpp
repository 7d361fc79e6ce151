#pragma once

// Script execution: module declarations register signatures, open blocks
// extend a copy of the base module with loose constants and layer-1 equations,
// red commands reduce to normal form and check any attached expectation.

#include <algorithm>
#include <memory>

#include "engine.hpp"
#include "parser.hpp"

namespace osr {

struct ReductionResult {
  const FlatModule* mod = nullptr;
  TermPtr input, output;
  std::optional<std::string> expect;
  bool ok = true;  // expectation met (or absent), no error, budget not exhausted
  bool exhausted = false;
  std::string error;
  long steps = 0;
  int line = 0;
};

class Session {
public:
  ModuleRegistry registry;
  long budget = 1000000;
  bool use_memo = true;

  std::vector<ReductionResult> results;

  void run_file(const std::string& path) {
    std::string dir = dir_of(path);
    auto& dirs = registry.search_dirs;
    if (std::find(dirs.begin(), dirs.end(), dir) == dirs.end()) dirs.push_back(dir);
    run_script(registry.load_file(path));
  }

  void run_script(const Script& s) {
    for (const auto& item : s.items) {
      if (const ModuleAst* m = std::get_if<ModuleAst>(&item)) {
        last_module_ = m->name;
      } else if (const RedCmd* rc = std::get_if<RedCmd>(&item)) {
        const std::string& name = rc->in_module.empty() ? last_module_ : rc->in_module;
        if (name.empty()) {
          ReductionResult r;
          r.line = rc->line;
          r.expect = rc->expect;
          r.error = "no module in scope for reduction";
          r.ok = false;
          results.push_back(std::move(r));
        } else {
          exec_red(*rc, registry.flat(name), {});
        }
      } else {
        exec_open(std::get<OpenBlock>(item));
      }
    }
  }

  bool all_ok() const {
    for (const auto& r : results)
      if (!r.ok) return false;
    return true;
  }

  RewriteContext& context_for(const FlatModule& m) {
    auto it = ctxs_.find(&m);
    if (it == ctxs_.end())
      it = ctxs_.emplace(&m, std::make_unique<RewriteContext>(m, budget, use_memo)).first;
    return *it->second;
  }

  // Extends a copy of base with open-block declarations; reductions are run
  // as encountered. The extended module stays alive for later inspection.
  void exec_open(const OpenBlock& ob) {
    opens_.push_back(std::make_unique<FlatModule>(registry.flat(ob.base)));
    FlatModule& m = *opens_.back();
    std::map<std::string, std::string> vars;
    bool dirty = true;
    for (const auto& item : ob.items) {
      if (const OpDeclAst* od = std::get_if<OpDeclAst>(&item)) {
        for (const auto& n : od->names)
          m.add_op(Operator{n, od->arity, od->coarity, od->attrs, od->behavioral, false, false});
        dirty = true;
      } else if (const VarDeclAst* vd = std::get_if<VarDeclAst>(&item)) {
        for (const auto& v : vd->names) vars[v] = vd->sort;
        dirty = true;
      } else if (const EqDeclAst* eq = std::get_if<EqDeclAst>(&item)) {
        m.eqs.push_back(ModuleRegistry::parse_equation(*eq, m, vars, m.name, 1));
        dirty = true;
      } else {
        if (dirty) {
          ctxs_.erase(&m);
          dirty = false;
        }
        exec_red(std::get<RedCmd>(item), m, vars);
      }
    }
  }

  void exec_red(const RedCmd& rc, const FlatModule& m,
                const std::map<std::string, std::string>& vars) {
    ReductionResult r;
    r.mod = &m;
    r.line = rc.line;
    r.expect = rc.expect;
    try {
      TermParser tp(m, vars);
      r.input = tp.parse(rc.tokens);
      least_sort(r.input, m);
      RewriteContext& ctx = context_for(m);
      long before = ctx.stats().steps;
      r.output = ctx.reduce(r.input);
      r.steps = ctx.stats().steps - before;
      if (r.expect) {
        TermParser ep(m, vars);
        TermPtr want = ep.parse(lex(*r.expect));
        r.ok = term_eq(want, r.output);
      }
    } catch (const BudgetExhausted&) {
      r.exhausted = true;
      r.ok = false;
    } catch (const std::exception& ex) {
      r.error = ex.what();
      r.ok = false;
    }
    results.push_back(std::move(r));
  }

private:
  std::string last_module_;
  std::vector<std::unique_ptr<FlatModule>> opens_;
  std::map<const FlatModule*, std::unique_ptr<RewriteContext>> ctxs_;
};

}  // namespace osr
