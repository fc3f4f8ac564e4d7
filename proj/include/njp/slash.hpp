// Feasible slash relation: an immediate-derivability test refined by
// inductive clauses per connective, plus the analysis-augmented base set.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "njp/derivation.hpp"
#include "njp/horn.hpp"
#include "njp/occurrence.hpp"

namespace njp {

struct SlashJudgment {
  std::vector<Sequent> base;
  Cedent context;
  FormulaRef formula = nullptr;
  bool holds = false;
};

namespace detail {

class SlashEval {
 public:
  SlashEval(const std::vector<Sequent>& base, const Cedent& context)
      : base_(base), context_(context) {}

  bool eval(FormulaRef f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    bool r = compute(f);
    memo_.emplace(f, r);
    return r;
  }

 private:
  const std::vector<Sequent>& base_;
  const Cedent& context_;
  std::unordered_map<FormulaRef, bool> memo_;

  bool compute(FormulaRef f) {
    // Prerequisite: some subsequent of context => f is immediately
    // derivable from the base.
    if (!id_check(base_, Sequent(context_, f)).has_value()) return false;
    switch (f->kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Bottom:
        return true;
      case Formula::Kind::Impl:
        return !eval(f->left()) || eval(f->right());
      case Formula::Kind::Conj:
        return eval(f->left()) && eval(f->right());
      case Formula::Kind::Disj:
        return eval(f->left()) || eval(f->right());
    }
    return false;
  }
};

}  // namespace detail

inline bool slash_eval(const std::vector<Sequent>& base, const Cedent& context, FormulaRef f) {
  return detail::SlashEval(base, context).eval(f);
}

// Cedent form: every member must hold.
inline bool slash_eval(const std::vector<Sequent>& base, const Cedent& context,
                       const Cedent& formulas) {
  detail::SlashEval ev(base, context);
  for (FormulaRef f : formulas)
    if (!ev.eval(f)) return false;
  return true;
}

// Per-subformula trace for diagnostics.
struct SlashTraceEntry {
  FormulaRef formula = nullptr;
  bool holds = false;
};

inline bool slash_eval_trace(const std::vector<Sequent>& base, const Cedent& context,
                             FormulaRef f, std::vector<SlashTraceEntry>& trace) {
  detail::SlashEval ev(base, context);
  auto walk = [&](auto&& self, FormulaRef g) -> void {
    if (!g->is_atomic()) {
      self(self, g->left());
      self(self, g->right());
    }
    trace.push_back(SlashTraceEntry{g, ev.eval(g)});
  };
  walk(walk, f);
  return ev.eval(f);
}

// Base set for derivability-with-analyses: the derivation's sequents, the
// reflexive sequents of its conclusion hypotheses, and the analysis sets of
// those hypotheses.
inline std::vector<Sequent> build_analysis_base(const DerivPtr& d) {
  std::vector<Sequent> base = sequents_of(d);
  std::unordered_set<Sequent, SequentHash> seen(base.begin(), base.end());
  const Cedent& g0 = d->conclusion().antecedent;
  auto add = [&](const Sequent& s) {
    if (seen.insert(s).second) base.push_back(s);
  };
  for (FormulaRef g : g0) add(Sequent(g0, g));
  for (FormulaRef g : g0) {
    SequentSet cs = analysis_set(g);
    for (const Sequent& s : cs) add(s);
  }
  return base;
}

}  // namespace njp
