// Strictly positive occurrence analysis: occurrence paths, the Harrop test,
// enumeration of strictly positive disjunctions over a cedent, choice-vector
// strengthening, and analysis sets.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "njp/cedent.hpp"
#include "njp/formula.hpp"

namespace njp {

// A subformula occurrence: which cedent member (by canonical index) and the
// child directions from its root. For implications only the right child is
// ever strictly positive.
struct OccurrencePath {
  enum class Step : unsigned char { Left, Right };
  std::size_t formula_index = 0;
  std::vector<Step> steps;

  bool operator==(const OccurrencePath& o) const {
    return formula_index == o.formula_index && steps == o.steps;
  }
  bool operator<(const OccurrencePath& o) const {
    if (formula_index != o.formula_index) return formula_index < o.formula_index;
    return steps < o.steps;
  }
  // True if o addresses a position inside this occurrence.
  bool prefix_of(const OccurrencePath& o) const {
    if (formula_index != o.formula_index || steps.size() > o.steps.size()) return false;
    return std::equal(steps.begin(), steps.end(), o.steps.begin());
  }
};

inline std::string to_string(const OccurrencePath& p) {
  std::string out = std::to_string(p.formula_index) + ":";
  if (p.steps.empty()) out += "root";
  for (auto s : p.steps) out += (s == OccurrencePath::Step::Left ? 'L' : 'R');
  return out;
}

inline FormulaRef resolve(FormulaRef root, const OccurrencePath& p) {
  FormulaRef f = root;
  for (auto s : p.steps) {
    if (f->is_atomic()) throw PreconditionError("occurrence path leaves the formula");
    f = (s == OccurrencePath::Step::Left) ? f->left() : f->right();
  }
  return f;
}

inline bool is_harrop(FormulaRef f) { return f->harrop(); }

// All strictly positive occurrences in f, in preorder (an occurrence always
// precedes the occurrences properly inside it). formula_index is left 0;
// cedent-level callers fill it in.
inline std::vector<OccurrencePath> strictly_positive_occurrences(FormulaRef f) {
  std::vector<OccurrencePath> out;
  std::vector<OccurrencePath::Step> steps;
  auto walk = [&](auto&& self, FormulaRef g) -> void {
    out.push_back(OccurrencePath{0, steps});
    switch (g->kind()) {
      case Formula::Kind::Conj:
      case Formula::Kind::Disj:
        steps.push_back(OccurrencePath::Step::Left);
        self(self, g->left());
        steps.back() = OccurrencePath::Step::Right;
        self(self, g->right());
        steps.pop_back();
        break;
      case Formula::Kind::Impl:
        steps.push_back(OccurrencePath::Step::Right);
        self(self, g->right());
        steps.pop_back();
        break;
      default:
        break;
    }
  };
  walk(walk, f);
  return out;
}

// One strictly positive disjunction occurrence in a cedent.
struct SpdOccurrence {
  OccurrencePath path;
  FormulaRef disjunction = nullptr;  // the Disj node the path resolves to
};

// Enumeration of every strictly positive disjunction occurrence of a cedent,
// ordered so that an occurrence never sits inside an earlier-indexed one
// (preorder within each member, members in canonical cedent order).
struct SpdEnumeration {
  std::vector<SpdOccurrence> occurrences;
  std::size_t count() const { return occurrences.size(); }
};

// Bit j selects the disjunct of occurrence j: 0 left, 1 right.
struct ChoiceVector {
  std::vector<unsigned char> bits;

  std::size_t size() const { return bits.size(); }
  static ChoiceVector from_number(unsigned long long k, std::size_t n) {
    ChoiceVector cv;
    cv.bits.resize(n);
    for (std::size_t j = 0; j < n; ++j) cv.bits[j] = (k >> j) & 1u;
    return cv;
  }
  // Bitstring with bit 0 leftmost, e.g. "011".
  static ChoiceVector from_bitstring(std::string_view s) {
    ChoiceVector cv;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw ParseError("choice bit must be 0 or 1", i);
      cv.bits.push_back(s[i] == '1');
    }
    return cv;
  }
  std::string to_bitstring() const {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
  }
};

inline SpdEnumeration spd_enumerate(const Cedent& g) {
  SpdEnumeration e;
  std::vector<OccurrencePath::Step> steps;
  std::size_t index = 0;
  auto walk = [&](auto&& self, FormulaRef f) -> void {
    if (f->harrop()) return;  // no strictly positive disjunction below
    switch (f->kind()) {
      case Formula::Kind::Disj:
        e.occurrences.push_back(SpdOccurrence{OccurrencePath{index, steps}, f});
        steps.push_back(OccurrencePath::Step::Left);
        self(self, f->left());
        steps.back() = OccurrencePath::Step::Right;
        self(self, f->right());
        steps.pop_back();
        break;
      case Formula::Kind::Conj:
        steps.push_back(OccurrencePath::Step::Left);
        self(self, f->left());
        steps.back() = OccurrencePath::Step::Right;
        self(self, f->right());
        steps.pop_back();
        break;
      case Formula::Kind::Impl:
        steps.push_back(OccurrencePath::Step::Right);
        self(self, f->right());
        steps.pop_back();
        break;
      default:
        break;
    }
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    index = i;
    walk(walk, g[i]);
  }
  return e;
}

namespace detail {

// Per-formula view of a choice: original occurrence path -> chosen bit.
using ChoiceMap = std::map<std::vector<OccurrencePath::Step>, unsigned char>;

inline ChoiceMap choice_map_for(const SpdEnumeration& e, const ChoiceVector& k,
                                std::size_t formula_index) {
  ChoiceMap m;
  for (std::size_t j = 0; j < e.occurrences.size(); ++j)
    if (e.occurrences[j].path.formula_index == formula_index)
      m.emplace(e.occurrences[j].path.steps, k.bits[j]);
  return m;
}

// Applies the choices to one formula. Replacements happen outermost-first:
// at a chosen disjunction the walk continues into the chosen disjunct, whose
// inner occurrences keep their original paths.
inline FormulaRef strengthen_formula(FormulaRef f, const ChoiceMap& choices,
                                     std::vector<OccurrencePath::Step>& steps) {
  if (f->harrop()) return f;  // nothing strictly positive to replace
  switch (f->kind()) {
    case Formula::Kind::Disj: {
      auto it = choices.find(steps);
      if (it == choices.end())
        throw PreconditionError("enumeration does not cover a strictly positive disjunction");
      steps.push_back(it->second ? OccurrencePath::Step::Right : OccurrencePath::Step::Left);
      FormulaRef r = strengthen_formula(it->second ? f->right() : f->left(), choices, steps);
      steps.pop_back();
      return r;
    }
    case Formula::Kind::Conj: {
      steps.push_back(OccurrencePath::Step::Left);
      FormulaRef l = strengthen_formula(f->left(), choices, steps);
      steps.back() = OccurrencePath::Step::Right;
      FormulaRef r = strengthen_formula(f->right(), choices, steps);
      steps.pop_back();
      return Formula::conj(l, r);
    }
    case Formula::Kind::Impl: {
      steps.push_back(OccurrencePath::Step::Right);
      FormulaRef r = strengthen_formula(f->right(), choices, steps);
      steps.pop_back();
      return Formula::impl(f->left(), r);
    }
    default:
      return f;
  }
}

}  // namespace detail

inline FormulaRef strengthen_member(const Cedent& g, const SpdEnumeration& e,
                                    const ChoiceVector& k, std::size_t formula_index) {
  detail::ChoiceMap m = detail::choice_map_for(e, k, formula_index);
  std::vector<OccurrencePath::Step> steps;
  return detail::strengthen_formula(g[formula_index], m, steps);
}

// The strengthened cedent: every strictly positive disjunction replaced by
// its chosen disjunct. The result is always Harrop.
inline Cedent strengthen(const Cedent& g, const SpdEnumeration& e, const ChoiceVector& k) {
  if (e.count() != k.size())
    throw PreconditionError("choice vector length does not match enumeration");
  std::vector<FormulaRef> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(strengthen_member(g, e, k, i));
  return Cedent(out.begin(), out.end());
}

namespace detail {
inline bool sequent_less(const Sequent& a, const Sequent& b) {
  if (a.succedent != b.succedent) return formula_compare(a.succedent, b.succedent) < 0;
  if (a.antecedent.size() != b.antecedent.size()) return a.antecedent.size() < b.antecedent.size();
  for (std::size_t i = 0; i < a.antecedent.size(); ++i)
    if (a.antecedent[i] != b.antecedent[i])
      return formula_compare(a.antecedent[i], b.antecedent[i]) < 0;
  return false;
}
}  // namespace detail

using SequentSet = std::set<Sequent, bool (*)(const Sequent&, const Sequent&)>;

inline SequentSet make_sequent_set() { return SequentSet(&detail::sequent_less); }

// The analysis sequents of a formula: implications unpacked as modus ponens
// steps, conjunctions as projections, along strictly positive positions.

inline void analysis_set_into(FormulaRef f, SequentSet& out) {
  switch (f->kind()) {
    case Formula::Kind::Impl: {
      out.insert(Sequent(Cedent{f->left(), f}, f->right()));
      analysis_set_into(f->right(), out);
      break;
    }
    case Formula::Kind::Conj: {
      out.insert(Sequent(Cedent{f}, f->left()));
      out.insert(Sequent(Cedent{f}, f->right()));
      analysis_set_into(f->left(), out);
      analysis_set_into(f->right(), out);
      break;
    }
    default:
      break;  // atoms, bottom, disjunctions contribute nothing
  }
}

inline SequentSet analysis_set(FormulaRef f) {
  SequentSet out = make_sequent_set();
  analysis_set_into(f, out);
  return out;
}

}  // namespace njp
