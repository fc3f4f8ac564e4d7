// Derivation surgery: weakening, ex-falso conversion, grafting, the
// canonical derivation of a strengthened hypothesis, and the rewrite of a
// whole derivation under a choice vector.
#pragma once

#include <unordered_map>
#include <vector>

#include "njp/derivation.hpp"
#include "njp/occurrence.hpp"

namespace njp {

namespace detail {

// Caches cedent rewrites per underlying representation so that widely shared
// antecedents are transformed once per pass.
class CedentRewrite {
 public:
  template <typename F>
  const Cedent& get(const Cedent& in, F&& f) {
    auto it = cache_.find(in.rep_identity());
    if (it != cache_.end()) return it->second;
    Cedent out = f(in);
    return cache_.emplace(in.rep_identity(), std::move(out)).first->second;
  }

 private:
  std::unordered_map<const void*, Cedent> cache_;
};

inline DerivPtr weaken_walk(const DerivPtr& d, const Cedent& extra, CedentRewrite& cache) {
  const Cedent& ant = cache.get(d->conclusion().antecedent,
                                [&](const Cedent& g) { return g.union_with(extra); });
  Sequent seq(ant, d->conclusion().succedent);
  auto sub = [&](std::size_t i) { return weaken_walk(d->premise(i), extra, cache); };
  switch (d->premise_count()) {
    case 0: return std::make_shared<const Derivation>(d->rule(), std::move(seq));
    case 1: return std::make_shared<const Derivation>(d->rule(), std::move(seq), sub(0));
    case 2: {
      DerivPtr p0 = sub(0);
      return std::make_shared<const Derivation>(d->rule(), std::move(seq), std::move(p0), sub(1));
    }
    default: {
      DerivPtr p0 = sub(0), p1 = sub(1);
      return std::make_shared<const Derivation>(d->rule(), std::move(seq), std::move(p0),
                                                std::move(p1), sub(2));
    }
  }
}

}  // namespace detail

// Adds extra to every antecedent. Axioms tolerate arbitrary context, so the
// result checks whenever the input does.
inline DerivPtr weaken(const DerivPtr& d, const Cedent& extra) {
  if (extra.empty()) return d;
  detail::CedentRewrite cache;
  return detail::weaken_walk(d, extra, cache);
}

// From a derivation of g => _|_ builds one of g => target: atoms go through
// the discharged-bottom axiom, compound targets recurse through their
// introduction rules, bottom itself is the input.
inline DerivPtr ex_falso(const DerivPtr& d0, FormulaRef target) {
  const Sequent& c = d0->conclusion();
  if (!c.succedent->is_bottom()) throw PreconditionError("ex_falso premise must conclude _|_");
  const Cedent& g = c.antecedent;
  switch (target->kind()) {
    case Formula::Kind::Bottom:
      return d0;
    case Formula::Kind::Atom: {
      DerivPtr axiom = ax(g.with(Formula::bottom()), target);
      return imp_e(imp_i_over(axiom, Formula::bottom(), g), d0);
    }
    case Formula::Kind::Conj:
      return and_i(ex_falso(d0, target->left()), ex_falso(d0, target->right()));
    case Formula::Kind::Disj:
      return or_i0(ex_falso(d0, target->left()), target->right());
    case Formula::Kind::Impl: {
      DerivPtr inner = ex_falso(weaken(d0, Cedent{target->left()}), target->right());
      return imp_i_over(inner, target->left(), g);
    }
  }
  throw PreconditionError("unreachable");
}

namespace detail {

struct GraftContext {
  FormulaRef hyp;         // the hypothesis being replaced
  const DerivPtr* plant;  // derivation of plant_ant => hyp
  Cedent plant_ant;
  CedentRewrite rewrite;
};

inline DerivPtr graft_walk(const DerivPtr& d, GraftContext& ctx) {
  const Sequent& c = d->conclusion();
  const Cedent& new_ant = ctx.rewrite.get(c.antecedent, [&](const Cedent& g) {
    return g.without(ctx.hyp).union_with(ctx.plant_ant);
  });

  if (d->rule() == Rule::Ax) {
    FormulaRef succ = c.succedent;
    if (new_ant.contains(succ)) return ax(new_ant, succ);
    if (succ == ctx.hyp) {
      // Plant a copy of the grafted derivation, weakened to this context.
      Cedent extra;
      for (FormulaRef f : new_ant)
        if (!ctx.plant_ant.contains(f)) extra = extra.with(f);
      return weaken(*ctx.plant, extra);
    }
    if (new_ant.contains(Formula::bottom()) && succ->is_atom()) return ax(new_ant, succ);
    if (ctx.hyp->is_bottom() && c.antecedent.contains(Formula::bottom()) && succ->is_atom()) {
      // The removed hypothesis was the bottom of a bottom-axiom: route the
      // planted derivation of _|_ through ex falso.
      Cedent extra;
      for (FormulaRef f : new_ant)
        if (!ctx.plant_ant.contains(f)) extra = extra.with(f);
      return ex_falso(weaken(*ctx.plant, extra), succ);
    }
    throw PreconditionError("graft hit an axiom it cannot rebuild: " + to_string(c));
  }

  // A rule that re-introduces the grafted hypothesis shadows it: above that
  // point the hypothesis is locally justified, so only weakening applies.
  auto sub = [&](std::size_t i) -> DerivPtr {
    bool rebinds = false;
    if (d->rule() == Rule::ImpI && i == 0)
      rebinds = c.succedent->kind() == Formula::Kind::Impl && c.succedent->left() == ctx.hyp;
    if (d->rule() == Rule::OrE && i >= 1) {
      FormulaRef major = d->premise(0)->conclusion().succedent;
      FormulaRef case_hyp = (i == 1) ? major->left() : major->right();
      rebinds = case_hyp == ctx.hyp;
    }
    return rebinds ? weaken(d->premise(i), ctx.plant_ant) : graft_walk(d->premise(i), ctx);
  };
  Sequent seq(new_ant, c.succedent);
  switch (d->premise_count()) {
    case 1: return std::make_shared<const Derivation>(d->rule(), std::move(seq), sub(0));
    case 2: {
      DerivPtr p0 = sub(0);
      return std::make_shared<const Derivation>(d->rule(), std::move(seq), std::move(p0), sub(1));
    }
    default: {
      DerivPtr p0 = sub(0), p1 = sub(1);
      return std::make_shared<const Derivation>(d->rule(), std::move(seq), std::move(p0),
                                                std::move(p1), sub(2));
    }
  }
}

}  // namespace detail

// Replaces the hypothesis alpha (= d0's succedent) of d1 by d0: every axiom
// of d1 with principal formula alpha becomes a weakened copy of d0, alpha is
// removed from antecedents and d0's antecedent added. Concludes G,D => beta
// from d0: G => alpha and d1: alpha,D => beta.
inline DerivPtr graft(const DerivPtr& d0, const DerivPtr& d1) {
  FormulaRef alpha = d0->conclusion().succedent;
  if (!d1->conclusion().antecedent.contains(alpha))
    throw PreconditionError("graft: hypothesis is not in the target antecedent");
  detail::GraftContext ctx{alpha, &d0, d0->conclusion().antecedent, {}};
  return detail::graft_walk(d1, ctx);
}

// ---------------------------------------------------------------------------
// Choice strengthening.

namespace detail {

// Builds the derivation {f*} => f where f* is f with the mapped strictly
// positive disjunctions replaced by their chosen disjuncts.
inline DerivPtr strengthened_implies_original(FormulaRef f, const ChoiceMap& choices,
                                              std::vector<OccurrencePath::Step>& steps) {
  if (f->harrop()) return ax(Cedent{f}, f);
  switch (f->kind()) {
    case Formula::Kind::Disj: {
      auto it = choices.find(steps);
      if (it == choices.end())
        throw PreconditionError("choice map does not cover a strictly positive disjunction");
      bool right = it->second != 0;
      steps.push_back(right ? OccurrencePath::Step::Right : OccurrencePath::Step::Left);
      DerivPtr rec = strengthened_implies_original(right ? f->right() : f->left(), choices, steps);
      steps.pop_back();
      return right ? or_i1(rec, f->left()) : or_i0(rec, f->right());
    }
    case Formula::Kind::Conj: {
      steps.push_back(OccurrencePath::Step::Left);
      FormulaRef l_star = strengthen_formula(f->left(), choices, steps);
      DerivPtr rec_l = strengthened_implies_original(f->left(), choices, steps);
      steps.back() = OccurrencePath::Step::Right;
      FormulaRef r_star = strengthen_formula(f->right(), choices, steps);
      DerivPtr rec_r = strengthened_implies_original(f->right(), choices, steps);
      steps.pop_back();
      FormulaRef star = Formula::conj(l_star, r_star);
      DerivPtr hyp = ax(Cedent{star}, star);
      DerivPtr dl = graft(and_e0(hyp), rec_l);  // {f*} => l
      DerivPtr dr = graft(and_e1(hyp), rec_r);  // {f*} => r
      return and_i(dl, dr);
    }
    case Formula::Kind::Impl: {
      FormulaRef beta = f->left();
      steps.push_back(OccurrencePath::Step::Right);
      FormulaRef g_star = strengthen_formula(f->right(), choices, steps);
      DerivPtr rec = strengthened_implies_original(f->right(), choices, steps);
      steps.pop_back();
      FormulaRef star = Formula::impl(beta, g_star);
      Cedent both{beta, star};
      DerivPtr app = imp_e(ax(both, star), ax(both, beta));  // beta, f* => g*
      DerivPtr grafted = graft(app, rec);                    // beta, f* => g
      return imp_i(grafted, beta);                           // {f*} => f
    }
    default:
      return ax(Cedent{f}, f);  // unreachable: atoms are Harrop
  }
}

}  // namespace detail

// Canonical derivation of g[k] => g for one cedent member g: disjunction
// choices are undone by or-introductions, conjunctions project and rebuild,
// implications compose through their consequent.
inline DerivPtr strengthening_derivation(const Cedent& g, const SpdEnumeration& e,
                                         const ChoiceVector& k, std::size_t formula_index) {
  if (e.count() != k.size())
    throw PreconditionError("choice vector length does not match enumeration");
  detail::ChoiceMap m = detail::choice_map_for(e, k, formula_index);
  std::vector<OccurrencePath::Step> steps;
  return detail::strengthened_implies_original(g[formula_index], m, steps);
}

// Rewrites d (concluding G => phi) into a derivation of G[k] => phi by
// grafting the strengthening derivation of every hypothesis that contains a
// chosen disjunction. Polynomial in |d| + the strengthening derivations.
inline DerivPtr apply_choices(const DerivPtr& d, const SpdEnumeration& e, const ChoiceVector& k) {
  if (e.count() != k.size())
    throw PreconditionError("choice vector length does not match enumeration");
  const Cedent g = d->conclusion().antecedent;
  DerivPtr cur = d;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]->harrop()) continue;  // no strictly positive disjunction to replace
    DerivPtr s = strengthening_derivation(g, e, k, i);
    cur = graft(s, cur);
  }
  return cur;
}

}  // namespace njp
