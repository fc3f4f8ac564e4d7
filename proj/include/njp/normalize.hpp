// Harrop normalization: locating Harrop maximal formulas, the three
// contracta, fuel-bounded normalization, and the introduction-ending check.
#pragma once

#include <optional>
#include <vector>

#include "njp/surgery.hpp"

namespace njp {

// Address of a redex: an elimination node whose major premise is the
// conclusion of the matching introduction rule and whose conclusion has a
// Harrop antecedent.
struct RedexSite {
  enum class Kind : unsigned char { Disj, Conj, Impl };
  std::vector<int> path;  // premise indices from the root
  Kind kind = Kind::Conj;
};

namespace detail {

inline std::optional<RedexSite::Kind> redex_kind_at(const Derivation& d) {
  if (!d.conclusion().antecedent.harrop()) return std::nullopt;
  switch (d.rule()) {
    case Rule::OrE: {
      Rule m = d.premise(0)->rule();
      if (m == Rule::OrI0 || m == Rule::OrI1) return RedexSite::Kind::Disj;
      return std::nullopt;
    }
    case Rule::AndE0:
    case Rule::AndE1:
      if (d.premise(0)->rule() == Rule::AndI) return RedexSite::Kind::Conj;
      return std::nullopt;
    case Rule::ImpE:
      if (d.premise(0)->rule() == Rule::ImpI) return RedexSite::Kind::Impl;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

inline bool find_redex_walk(const Derivation& d, std::vector<int>& path, RedexSite& out) {
  for (std::size_t i = 0; i < d.premise_count(); ++i) {
    path.push_back(static_cast<int>(i));
    if (find_redex_walk(*d.premise(i), path, out)) return true;
    path.pop_back();
  }
  if (auto kind = redex_kind_at(d)) {
    out.path = path;
    out.kind = *kind;
    return true;
  }
  return false;
}

}  // namespace detail

// Leftmost-topmost Harrop maximal occurrence, or nullopt when d is Harrop
// normal.
inline std::optional<RedexSite> find_harrop_maximal(const DerivPtr& d) {
  RedexSite site;
  std::vector<int> path;
  if (detail::find_redex_walk(*d, path, site)) return site;
  return std::nullopt;
}

namespace detail {

inline DerivPtr contract_at(const DerivPtr& d) {
  switch (d->rule()) {
    case Rule::AndE0:
      return d->premise(0)->premise(0);
    case Rule::AndE1:
      return d->premise(0)->premise(1);
    case Rule::OrE: {
      const DerivPtr& intro = d->premise(0);
      bool left = intro->rule() == Rule::OrI0;
      const DerivPtr& disjunct = intro->premise(0);          // G => alpha_i
      const DerivPtr& minor = d->premise(left ? 1 : 2);      // alpha_i, G => beta
      return graft(disjunct, minor);
    }
    case Rule::ImpE: {
      const DerivPtr& intro = d->premise(0);  // impI of alpha, G => beta
      const DerivPtr& arg = d->premise(1);    // G => alpha
      return graft(arg, intro->premise(0));
    }
    default:
      throw PreconditionError("contract: site is not an elimination node");
  }
}

inline DerivPtr rebuild_along(const DerivPtr& d, const std::vector<int>& path, std::size_t at) {
  if (at == path.size()) return contract_at(d);
  std::size_t idx = static_cast<std::size_t>(path[at]);
  if (idx >= d->premise_count()) throw PreconditionError("contract: invalid site path");
  std::vector<DerivPtr> premises;
  premises.reserve(d->premise_count());
  for (std::size_t i = 0; i < d->premise_count(); ++i)
    premises.push_back(i == idx ? rebuild_along(d->premise(i), path, at + 1) : d->premise(i));
  return make_deriv(d->rule(), d->conclusion(), std::move(premises));
}

}  // namespace detail

// Applies the contractum at the site; the conclusion sequent is preserved.
inline DerivPtr contract(const DerivPtr& d, const RedexSite& site) {
  return detail::rebuild_along(d, site.path, 0);
}

struct NormalizeResult {
  DerivPtr derivation;       // normal form, or the partial result
  std::size_t steps = 0;     // contractions performed
  bool fuel_exhausted = false;
};

// Contracts leftmost-topmost redexes until none remain or fuel runs out.
inline NormalizeResult harrop_normalize(const DerivPtr& d, std::size_t fuel) {
  NormalizeResult res{d, 0, false};
  while (auto site = find_harrop_maximal(res.derivation)) {
    if (res.steps >= fuel) {
      res.fuel_exhausted = true;
      return res;
    }
    res.derivation = contract(res.derivation, *site);
    ++res.steps;
  }
  return res;
}

struct IntroEndingError : Error {
  using Error::Error;
};

// For a Harrop-normal derivation with Harrop antecedent, no bottom
// hypothesis, and a non-Harrop succedent, the root must be an introduction.
// Preconditions are validated and reported distinctly.
inline bool check_intro_ending(const DerivPtr& d) {
  if (find_harrop_maximal(d).has_value())
    throw IntroEndingError("derivation is not Harrop normal");
  const Sequent& c = d->conclusion();
  if (!c.antecedent.harrop()) throw IntroEndingError("antecedent is not Harrop");
  if (c.antecedent.contains(Formula::bottom()))
    throw IntroEndingError("antecedent contains _|_");
  if (c.succedent->harrop()) throw IntroEndingError("succedent is Harrop");
  switch (d->rule()) {
    case Rule::OrI0:
    case Rule::OrI1:
    case Rule::AndI:
    case Rule::ImpI:
      return true;
    default:
      return false;
  }
}

}  // namespace njp
