// Seeded random instances for property testing: formulas, Harrop cedents,
// Horn clause sets, and checked derivations with prescribed shapes. All
// randomness flows from the caller's engine.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "njp/derivation.hpp"
#include "njp/horn.hpp"
#include "njp/surgery.hpp"

namespace njp {

class CorpusGen {
 public:
  explicit CorpusGen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  FormulaRef atom(int pool = 4) {
    static const char* names[] = {"p", "q", "r", "s", "u", "v"};
    return Formula::atom(names[pick(pool < 6 ? pool : 6)]);
  }

  FormulaRef formula(int depth, int atom_pool = 4, bool allow_bottom = false) {
    if (depth <= 0 || pick(4) == 0) {
      if (allow_bottom && pick(8) == 0) return Formula::bottom();
      return atom(atom_pool);
    }
    FormulaRef l = formula(depth - 1, atom_pool, allow_bottom);
    FormulaRef r = formula(depth - 1, atom_pool, allow_bottom);
    switch (pick(3)) {
      case 0: return Formula::conj(l, r);
      case 1: return Formula::disj(l, r);
      default: return Formula::impl(l, r);
    }
  }

  // No strictly positive disjunction: disjunctions may appear only to the
  // left of implications.
  FormulaRef harrop_formula(int depth, int atom_pool = 4) {
    if (depth <= 0 || pick(4) == 0) return atom(atom_pool);
    switch (pick(3)) {
      case 0:
        return Formula::conj(harrop_formula(depth - 1, atom_pool),
                             harrop_formula(depth - 1, atom_pool));
      case 1:
        return Formula::impl(formula(depth - 1, atom_pool), harrop_formula(depth - 1, atom_pool));
      default:
        return atom(atom_pool);
    }
  }

  Cedent harrop_cedent(int members, int depth, int atom_pool = 4) {
    std::vector<FormulaRef> fs;
    for (int i = 0; i < members; ++i) fs.push_back(harrop_formula(depth, atom_pool));
    return Cedent(fs.begin(), fs.end());
  }

  // A cedent whose strictly positive disjunction count stays at or below
  // the bound (retry sampling).
  Cedent bounded_spd_cedent(int members, int depth, std::size_t max_spd, int atom_pool = 4) {
    for (;;) {
      std::vector<FormulaRef> fs;
      std::size_t spd = 0;
      for (int i = 0; i < members; ++i) {
        FormulaRef f = pick(2) ? formula(depth, atom_pool) : harrop_formula(depth, atom_pool);
        spd += f->spd_count();
        fs.push_back(f);
      }
      if (spd <= max_spd) return Cedent(fs.begin(), fs.end());
    }
  }

  HornClauseSet horn_set(int num_atoms, int num_clauses, int max_negatives = 3) {
    HornClauseSet h;
    for (int i = 0; i < num_clauses; ++i) {
      std::vector<FormulaRef> negs;
      int k = static_cast<int>(pick(static_cast<std::size_t>(max_negatives) + 1));
      for (int j = 0; j < k; ++j)
        negs.push_back(Formula::atom("x" + std::to_string(pick(num_atoms))));
      FormulaRef pos = pick(4) == 0 ? nullptr : Formula::atom("x" + std::to_string(pick(num_atoms)));
      h.clauses.push_back(HornClause{Cedent(negs.begin(), negs.end()), pos});
    }
    return h;
  }

  // Checked derivation of g => goal, or nullopt when the bounded search
  // finds none. Takes detours through eliminations so that outputs carry
  // redexes for the normalization tests.
  std::optional<DerivPtr> derive_goal(const Cedent& g, FormulaRef goal, int depth) {
    if (depth < 0) return std::nullopt;
    std::vector<int> options{0, 1, 2, 3, 4, 5};
    shuffle(options);
    for (int opt : options) {
      switch (opt) {
        case 0:
          if (g.contains(goal)) {
            DerivPtr d = ax(g, goal);
            if (pick(3) == 0) return detour(d, depth);
            return d;
          }
          break;
        case 1:
          if (g.contains(Formula::bottom())) return ex_falso(ax(g, Formula::bottom()), goal);
          break;
        case 2:
          if (goal->kind() == Formula::Kind::Disj) {
            if (auto l = derive_goal(g, goal->left(), depth - 1)) return or_i0(*l, goal->right());
            if (auto r = derive_goal(g, goal->right(), depth - 1)) return or_i1(*r, goal->left());
          }
          break;
        case 3:
          if (goal->kind() == Formula::Kind::Conj) {
            auto l = derive_goal(g, goal->left(), depth - 1);
            if (!l) break;
            auto r = derive_goal(g, goal->right(), depth - 1);
            if (!r) break;
            return and_i(*l, *r);
          }
          break;
        case 4:
          if (goal->kind() == Formula::Kind::Impl) {
            auto body = derive_goal(g.with(goal->left()), goal->right(), depth - 1);
            if (body) return imp_i_over(*body, goal->left(), g);
          }
          break;
        case 5: {
          // Case split on a hypothesis disjunction.
          std::vector<FormulaRef> disjs;
          for (FormulaRef f : g)
            if (f->kind() == Formula::Kind::Disj) disjs.push_back(f);
          if (disjs.empty()) break;
          FormulaRef f = disjs[pick(disjs.size())];
          auto m0 = derive_goal(g.with(f->left()), goal, depth - 1);
          if (!m0) break;
          auto m1 = derive_goal(g.with(f->right()), goal, depth - 1);
          if (!m1) break;
          return or_e(ax(g, f), *m0, *m1);
        }
      }
    }
    return std::nullopt;
  }

  // Wraps a derivation in an introduction/elimination detour, creating a
  // contractible redex with the same conclusion.
  DerivPtr detour(const DerivPtr& d, int depth) {
    FormulaRef other = formula(1);
    switch (pick(3)) {
      case 0: {
        // and-detour: d pairs with an arbitrary derivable side.
        auto side = derive_goal(d->conclusion().antecedent, other, depth - 1);
        if (!side) return d;
        return and_e0(and_i(d, *side));
      }
      case 1: {
        // imp-detour: discharge a fresh hypothesis not used by d.
        DerivPtr weakened = weaken(d, Cedent{other});
        if (weakened->conclusion().antecedent == d->conclusion().antecedent) return d;
        auto arg = derive_goal(d->conclusion().antecedent, other, depth - 1);
        if (!arg) return d;
        return imp_e(imp_i(weakened, other), *arg);
      }
      default: {
        // or-detour: case split on an introduced disjunction.
        FormulaRef dis = Formula::disj(d->conclusion().succedent, other);
        const Cedent& g = d->conclusion().antecedent;
        DerivPtr major = or_i0(d, other);
        DerivPtr m0 = ax(g.with(dis->left()), d->conclusion().succedent);
        auto m1 = derive_goal(g.with(dis->right()), d->conclusion().succedent, depth - 1);
        if (!m1) return d;
        return or_e(major, m0, *m1);
      }
    }
  }

  // An extraction instance: a checked derivation of g => a0 | a1. When
  // harrop_context is set the antecedent is Harrop (occasionally with a
  // bottom hypothesis); otherwise it may contain strictly positive
  // disjunctions, capped at max_spd.
  DerivPtr extraction_instance(bool harrop_context, std::size_t max_spd = 3) {
    for (;;) {
      Cedent g;
      if (harrop_context) {
        g = harrop_cedent(1 + static_cast<int>(pick(3)), 2);
        if (pick(8) == 0) g = g.with(Formula::bottom());
      } else {
        g = bounded_spd_cedent(1 + static_cast<int>(pick(2)), 2, max_spd);
      }
      FormulaRef goal = Formula::disj(formula(1), formula(1));
      if (auto d = derive_goal(g, goal, 4)) return *d;
    }
  }

 private:
  std::mt19937_64 rng_;

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  void shuffle(std::vector<int>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(i)]);
  }
};

}  // namespace njp
