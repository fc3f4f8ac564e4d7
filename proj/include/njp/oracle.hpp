// Small-scale decision procedure for intuitionistic propositional validity.
// Backward search in a contraction-free calculus in which every rule
// strictly decreases a well-founded weight, so the search terminates without
// loop checking. Ground truth for the extraction routines; not built for
// scale.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "njp/cedent.hpp"
#include "njp/formula.hpp"

namespace njp {

struct OracleCapExceeded : Error {
  using Error::Error;
};

struct OracleVerdict {
  bool valid = false;
  std::size_t effort = 0;  // visited search nodes
};

namespace detail {

inline bool g4_search(Cedent g, FormulaRef goal, std::size_t& effort) {
  ++effort;

  // Axioms. The identity axiom is taken at any formula; bottom closes
  // every goal.
  if (g.contains(goal) || g.contains(Formula::bottom())) return true;

  // Non-branching left rules first.
  for (FormulaRef f : g) {
    switch (f->kind()) {
      case Formula::Kind::Conj:
        return g4_search(g.without(f).with(f->left()).with(f->right()), goal, effort);
      case Formula::Kind::Impl: {
        FormulaRef a = f->left();
        if (a->is_atom() && g.contains(a))
          return g4_search(g.without(f).with(f->right()), goal, effort);
        if (a->is_bottom())  // vacuous implication
          return g4_search(g.without(f), goal, effort);
        if (a->kind() == Formula::Kind::Conj) {
          FormulaRef curried = Formula::impl(a->left(), Formula::impl(a->right(), f->right()));
          return g4_search(g.without(f).with(curried), goal, effort);
        }
        if (a->kind() == Formula::Kind::Disj) {
          FormulaRef s0 = Formula::impl(a->left(), f->right());
          FormulaRef s1 = Formula::impl(a->right(), f->right());
          return g4_search(g.without(f).with(s0).with(s1), goal, effort);
        }
        break;  // implication with implication antecedent: choice point below
      }
      default:
        break;
    }
  }

  // Invertible right rules.
  switch (goal->kind()) {
    case Formula::Kind::Impl:
      return g4_search(g.with(goal->left()), goal->right(), effort);
    case Formula::Kind::Conj:
      return g4_search(g, goal->left(), effort) && g4_search(g, goal->right(), effort);
    default:
      break;
  }

  // Invertible branching left rule for hypothesis disjunctions.
  for (FormulaRef f : g)
    if (f->kind() == Formula::Kind::Disj) {
      Cedent rest = g.without(f);
      return g4_search(rest.with(f->left()), goal, effort) &&
             g4_search(rest.with(f->right()), goal, effort);
    }

  // Choice points.
  if (goal->kind() == Formula::Kind::Disj) {
    if (g4_search(g, goal->left(), effort)) return true;
    if (g4_search(g, goal->right(), effort)) return true;
  }
  for (FormulaRef f : g) {
    if (f->kind() != Formula::Kind::Impl) continue;
    FormulaRef a = f->left();
    if (a->kind() != Formula::Kind::Impl) continue;
    // (a0 -> a1) -> b: prove the nested implication under a1 -> b, then
    // continue with b.
    Cedent rest = g.without(f);
    if (g4_search(rest.with(Formula::impl(a->right(), f->right())), a, effort) &&
        g4_search(rest.with(f->right()), goal, effort))
      return true;
  }
  return false;
}

}  // namespace detail

// Decides derivability of s in intuitionistic propositional logic. The cap
// bounds the total formula size (node count) of the sequent.
inline OracleVerdict ipc_valid(const Sequent& s, std::size_t cap = 200) {
  std::size_t total = s.succedent->size();
  for (FormulaRef f : s.antecedent) total += f->size();
  if (total > cap)
    throw OracleCapExceeded("sequent size " + std::to_string(total) + " exceeds cap " +
                            std::to_string(cap));
  OracleVerdict v;
  v.valid = detail::g4_search(s.antecedent, s.succedent, v.effort);
  return v;
}

// ---------------------------------------------------------------------------
// Classical helpers (necessary-condition checks and satisfiability of
// concrete assignments).

inline void collect_atoms(FormulaRef f, std::vector<FormulaRef>& out) {
  switch (f->kind()) {
    case Formula::Kind::Atom:
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
      return;
    case Formula::Kind::Bottom:
      return;
    default:
      collect_atoms(f->left(), out);
      collect_atoms(f->right(), out);
  }
}

inline bool classical_eval(FormulaRef f, const std::map<FormulaRef, bool>& assignment) {
  switch (f->kind()) {
    case Formula::Kind::Atom: {
      auto it = assignment.find(f);
      return it != assignment.end() && it->second;
    }
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Conj:
      return classical_eval(f->left(), assignment) && classical_eval(f->right(), assignment);
    case Formula::Kind::Disj:
      return classical_eval(f->left(), assignment) || classical_eval(f->right(), assignment);
    case Formula::Kind::Impl:
      return !classical_eval(f->left(), assignment) || classical_eval(f->right(), assignment);
  }
  return false;
}

// Truth-table check of the classical implication antecedent => succedent.
// Exponential in the number of atoms; callers keep instances small.
inline bool classical_tautology(const Sequent& s) {
  std::vector<FormulaRef> atoms;
  for (FormulaRef f : s.antecedent) collect_atoms(f, atoms);
  collect_atoms(s.succedent, atoms);
  if (atoms.size() > 24) throw OracleCapExceeded("too many atoms for a truth table");
  for (std::uint64_t mask = 0; mask < (1ull << atoms.size()); ++mask) {
    std::map<FormulaRef, bool> assignment;
    for (std::size_t i = 0; i < atoms.size(); ++i) assignment[atoms[i]] = (mask >> i) & 1;
    bool ant = true;
    for (FormulaRef f : s.antecedent) ant = ant && classical_eval(f, assignment);
    if (ant && !classical_eval(s.succedent, assignment)) return false;
  }
  return true;
}

}  // namespace njp
