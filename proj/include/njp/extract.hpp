// Witness extraction from derivations of Harrop-antecedent disjunctions:
// the direct route over the derivation's own sequents, the slash route over
// the analysis-augmented base, and the generalized route under choice
// vectors.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "njp/horn.hpp"
#include "njp/slash.hpp"
#include "njp/surgery.hpp"

namespace njp {

struct BoundednessViolation : Error {
  using Error::Error;
};

struct ExtractionResult {
  int index = 0;  // which disjunct is derivable
  // Cut deduction over base_used, or a full derivation for the degenerate
  // bottom-hypothesis case.
  std::variant<CutPtr, DerivPtr> certificate;
  std::vector<Sequent> base_used;
  // The sequent the extraction ran on; for the choice route this is the
  // strengthened conclusion.
  Sequent conclusion;
  enum class Method : unsigned char { Direct, Slash, Choice } method = Method::Direct;
  ChoiceVector choices;  // only for Method::Choice

  const CutPtr* cut_certificate() const { return std::get_if<CutPtr>(&certificate); }
  const DerivPtr* derivation_certificate() const { return std::get_if<DerivPtr>(&certificate); }
  // The extracted sequent: conclusion's antecedent => chosen disjunct.
  Sequent extracted() const {
    FormulaRef alpha = index == 0 ? conclusion.succedent->left() : conclusion.succedent->right();
    return Sequent(conclusion.antecedent, alpha);
  }
};

namespace detail {

inline void require_extractable(const DerivPtr& d) {
  if (auto err = check_derivation(d))
    throw PreconditionError("derivation does not check: " + to_string(*err));
  if (d->conclusion().succedent->kind() != Formula::Kind::Disj)
    throw PreconditionError("succedent is not a disjunction");
  if (!d->conclusion().antecedent.harrop())
    throw PreconditionError("antecedent is not Harrop");
}

inline ExtractionResult extract_over_base(const DerivPtr& d, std::vector<Sequent> base,
                                          ExtractionResult::Method method) {
  const Sequent& concl = d->conclusion();
  FormulaRef alpha0 = concl.succedent->left();
  FormulaRef alpha1 = concl.succedent->right();

  ExtractionResult res;
  res.method = method;
  res.conclusion = concl;

  if (concl.antecedent.contains(Formula::bottom())) {
    // Degenerate case: the goal follows outright from the bottom
    // hypothesis; the certificate is a checking derivation rather than a
    // cut deduction.
    res.index = 0;
    res.certificate = ex_falso(ax(concl.antecedent, Formula::bottom()), alpha0);
    res.base_used = std::move(base);
    return res;
  }

  // The first disjunct wins ties.
  if (auto cd = id_check(base, Sequent(concl.antecedent, alpha0))) {
    res.index = 0;
    res.certificate = std::move(*cd);
    res.base_used = std::move(base);
    return res;
  }
  if (auto cd = id_check(base, Sequent(concl.antecedent, alpha1))) {
    res.index = 1;
    res.certificate = std::move(*cd);
    res.base_used = std::move(base);
    return res;
  }
  throw BoundednessViolation("neither disjunct is immediately derivable from the base");
}

}  // namespace detail

// Certificate drawn from the sequents occurring in d.
inline ExtractionResult extract_direct(const DerivPtr& d) {
  detail::require_extractable(d);
  return detail::extract_over_base(d, sequents_of(d), ExtractionResult::Method::Direct);
}

// Same procedure over the analysis-augmented base.
inline ExtractionResult extract_slash(const DerivPtr& d) {
  detail::require_extractable(d);
  return detail::extract_over_base(d, build_analysis_base(d), ExtractionResult::Method::Slash);
}

// Strengthens the antecedent by the choice vector, rewrites the derivation
// accordingly, and extracts from the rewritten derivation's sequents.
inline ExtractionResult extract_choice(const DerivPtr& d, const ChoiceVector& k) {
  if (auto err = check_derivation(d))
    throw PreconditionError("derivation does not check: " + to_string(*err));
  SpdEnumeration e = spd_enumerate(d->conclusion().antecedent);
  if (e.count() != k.size())
    throw PreconditionError("choice vector length " + std::to_string(k.size()) +
                            " does not match enumeration size " + std::to_string(e.count()));
  DerivPtr dk = apply_choices(d, e, k);
  ExtractionResult res = extract_direct(dk);
  res.method = ExtractionResult::Method::Choice;
  res.choices = k;
  return res;
}

// Validates the certificate against the recorded base and conclusion.
inline bool validate_extraction(const ExtractionResult& res) {
  Sequent target = res.extracted();
  if (const CutPtr* cd = res.cut_certificate())
    return validate_cut_deduction(*cd, res.base_used, target);
  const DerivPtr* dv = res.derivation_certificate();
  return dv && checks(*dv) && (*dv)->conclusion() == target;
}

}  // namespace njp
