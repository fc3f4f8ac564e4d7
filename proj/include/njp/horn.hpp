// Formulas-as-atoms Horn clause engine: positive unit resolution with a
// replayable trace, derived-atom closure, the immediate-derivability test
// with cut-deduction reconstruction, and certificate validation.
#pragma once

#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "njp/cedent.hpp"
#include "njp/formula.hpp"

namespace njp {

// At most one positive literal; formulas are treated as opaque atoms.
struct HornClause {
  Cedent negatives;
  FormulaRef positive = nullptr;  // null = purely negative clause

  bool empty() const { return negatives.empty() && positive == nullptr; }
};

struct HornClauseSet {
  std::vector<HornClause> clauses;
};

struct RefutationStep {
  FormulaRef unit = nullptr;
  std::size_t snapshot = 0;  // index of the clause-set stage the unit was picked from
};

// outcome: satisfiable, or a trace whose replay produces the empty clause.
struct HornResult {
  bool satisfiable = true;
  std::vector<RefutationStep> steps;
};

namespace detail {

struct FormulaHeap {
  // min-heap over canonical print order; deterministic pick order.
  std::vector<FormulaRef> v;
  void push(FormulaRef f) {
    v.push_back(f);
    std::push_heap(v.begin(), v.end(), [](FormulaRef a, FormulaRef b) {
      return formula_compare(a, b) > 0;
    });
  }
  FormulaRef pop() {
    std::pop_heap(v.begin(), v.end(), [](FormulaRef a, FormulaRef b) {
      return formula_compare(a, b) > 0;
    });
    FormulaRef f = v.back();
    v.pop_back();
    return f;
  }
  bool empty() const { return v.empty(); }
};

}  // namespace detail

// Positive unit resolution. Picks the canonically smallest available unit
// first; runs in time linear in the total literal count.
inline HornResult horn_satisfiability(const HornClauseSet& h) {
  HornResult res;
  std::unordered_map<FormulaRef, std::vector<std::size_t>> watchers;
  std::vector<std::size_t> pending_neg(h.clauses.size());
  std::unordered_set<FormulaRef> offered, picked;
  detail::FormulaHeap heap;

  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    const HornClause& c = h.clauses[i];
    pending_neg[i] = c.negatives.size();
    if (c.empty()) {
      res.satisfiable = false;  // the empty clause is already present
      return res;
    }
    if (c.negatives.empty() && c.positive && offered.insert(c.positive).second)
      heap.push(c.positive);
    for (FormulaRef f : c.negatives) watchers[f].push_back(i);
  }

  while (!heap.empty()) {
    FormulaRef p = heap.pop();
    if (!picked.insert(p).second) continue;
    res.steps.push_back(RefutationStep{p, res.steps.size()});
    auto it = watchers.find(p);
    if (it == watchers.end()) continue;
    for (std::size_t ci : it->second) {
      if (--pending_neg[ci] != 0) continue;
      const HornClause& c = h.clauses[ci];
      if (c.positive == nullptr) {
        res.satisfiable = false;  // clause shrank to the empty clause
        return res;
      }
      if (offered.insert(c.positive).second) heap.push(c.positive);
    }
  }
  res.satisfiable = true;
  res.steps.clear();  // trace only reported for refutations
  return res;
}

// Fixpoint of atoms derivable by unit propagation; purely negative clauses
// are ignored (no refutation semantics needed here).
inline std::unordered_set<FormulaRef> unit_closure(const HornClauseSet& h) {
  std::unordered_map<FormulaRef, std::vector<std::size_t>> watchers;
  std::vector<std::size_t> pending_neg(h.clauses.size());
  std::unordered_set<FormulaRef> derived;
  std::vector<FormulaRef> queue;

  auto add = [&](FormulaRef f) {
    if (derived.insert(f).second) queue.push_back(f);
  };
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    const HornClause& c = h.clauses[i];
    pending_neg[i] = c.negatives.size();
    if (c.negatives.empty() && c.positive) add(c.positive);
    for (FormulaRef f : c.negatives) watchers[f].push_back(i);
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto it = watchers.find(queue[qi]);
    if (it == watchers.end()) continue;
    for (std::size_t ci : it->second)
      if (--pending_neg[ci] == 0 && h.clauses[ci].positive) add(h.clauses[ci].positive);
  }
  return derived;
}

// Decomposes conjunctions of Horn clauses written as formulas: atoms,
// bottom, conjunctions, and implications whose antecedent is a conjunction
// of atoms. Throws on anything containing a disjunction.
inline void horn_clauses_of(FormulaRef f, std::vector<HornClause>& out) {
  switch (f->kind()) {
    case Formula::Kind::Atom:
      out.push_back(HornClause{{}, f});
      return;
    case Formula::Kind::Bottom:
      out.push_back(HornClause{});
      return;
    case Formula::Kind::Conj:
      horn_clauses_of(f->left(), out);
      horn_clauses_of(f->right(), out);
      return;
    case Formula::Kind::Impl: {
      std::vector<FormulaRef> negs;
      auto collect = [&](auto&& self, FormulaRef g) -> void {
        if (g->is_atom()) { negs.push_back(g); return; }
        if (g->kind() == Formula::Kind::Conj) {
          self(self, g->left());
          self(self, g->right());
          return;
        }
        throw PreconditionError("implication antecedent is not a conjunction of atoms: " + to_string(g));
      };
      collect(collect, f->left());
      Cedent ant(negs.begin(), negs.end());
      auto heads = [&](auto&& self, FormulaRef g) -> void {
        if (g->is_atom()) { out.push_back(HornClause{ant, g}); return; }
        if (g->is_bottom()) { out.push_back(HornClause{ant, nullptr}); return; }
        if (g->kind() == Formula::Kind::Conj) {
          self(self, g->left());
          self(self, g->right());
          return;
        }
        throw PreconditionError("implication consequent is not Horn-decomposable: " + to_string(g));
      };
      heads(heads, f->right());
      return;
    }
    case Formula::Kind::Disj:
      throw PreconditionError("disjunction is not Horn-decomposable: " + to_string(f));
  }
}

inline HornClauseSet horn_clauses_of(const Cedent& g) {
  HornClauseSet h;
  for (FormulaRef f : g) horn_clauses_of(f, h.clauses);
  return h;
}

// ---------------------------------------------------------------------------
// Cut deductions.

class CutDeduction;
using CutPtr = std::shared_ptr<const CutDeduction>;

// Binary tree of cut steps over base sequents; the extraction certificate.
class CutDeduction {
 public:
  static CutPtr leaf(Sequent s) { return CutPtr(new CutDeduction(std::move(s), nullptr, nullptr)); }

  // left: G => beta, right: beta, D => alpha; concludes G, D\beta => alpha.
  static CutPtr cut(CutPtr left, CutPtr right) {
    FormulaRef beta = left->conclusion().succedent;
    const Sequent& r = right->conclusion();
    if (!r.antecedent.contains(beta))
      throw PreconditionError("cut formula is not a hypothesis of the right premise");
    Sequent concl(left->conclusion().antecedent.union_with(r.antecedent.without(beta)),
                  r.succedent);
    return CutPtr(new CutDeduction(std::move(concl), std::move(left), std::move(right)));
  }

  bool is_leaf() const { return left_ == nullptr; }
  const Sequent& conclusion() const { return conclusion_; }
  const CutPtr& left() const { return left_; }
  const CutPtr& right() const { return right_; }

  std::size_t node_count() const {
    std::size_t n = 1;
    if (left_) n += left_->node_count() + right_->node_count();
    return n;
  }

 private:
  CutDeduction(Sequent c, CutPtr l, CutPtr r)
      : conclusion_(std::move(c)), left_(std::move(l)), right_(std::move(r)) {}
  Sequent conclusion_;
  CutPtr left_, right_;
};

// True iff every leaf is a base sequent, every cut is well-formed, and the
// conclusion is a subsequent of target. Shared subtrees are checked once.
inline bool validate_cut_deduction(const CutPtr& cd, const std::vector<Sequent>& base,
                                   const Sequent& target) {
  std::unordered_set<Sequent, SequentHash> base_set(base.begin(), base.end());
  std::unordered_set<const CutDeduction*> ok;
  auto walk = [&](auto&& self, const CutPtr& n) -> bool {
    if (ok.count(n.get())) return true;
    if (n->is_leaf()) {
      if (!base_set.count(n->conclusion())) return false;
    } else {
      if (!self(self, n->left()) || !self(self, n->right())) return false;
      FormulaRef beta = n->left()->conclusion().succedent;
      const Sequent& r = n->right()->conclusion();
      if (!r.antecedent.contains(beta)) return false;
      Sequent expect(n->left()->conclusion().antecedent.union_with(r.antecedent.without(beta)),
                     r.succedent);
      if (expect != n->conclusion()) return false;
    }
    ok.insert(n.get());
    return true;
  };
  return walk(walk, cd) && cd->conclusion().subsequent_of(target);
}

// ---------------------------------------------------------------------------
// Immediate derivability.

// Decides whether some subsequent of target lies in the closure of base
// under cut, returning a cut deduction of such a subsequent. Encoding: each
// base sequent is a Horn clause over formulas-as-atoms, each target
// hypothesis a unit. A unit derived from a base clause carries a cut
// deduction; resolution steps against target-hypothesis units are skipped,
// leaving those hypotheses in the certificate's antecedent.
inline std::optional<CutPtr> id_check(const std::vector<Sequent>& base, const Sequent& target) {
  struct AtomState {
    bool hyp = false;
    bool offered = false;
    bool processed = false;
    CutPtr cert;
  };
  // Sequents sharing an antecedent representation propagate as one group;
  // large bases reuse antecedents heavily.
  struct Group {
    std::size_t pending;
    std::vector<std::size_t> members;  // indices into base
  };
  std::unordered_map<FormulaRef, AtomState> state;
  std::unordered_map<const void*, std::size_t> group_of;
  std::vector<Group> groups;
  std::unordered_map<FormulaRef, std::vector<std::size_t>> watchers;
  detail::FormulaHeap heap;
  FormulaRef goal = target.succedent;

  auto offer = [&](FormulaRef f) {
    AtomState& s = state[f];
    if (!s.offered) {
      s.offered = true;
      heap.push(f);
    }
  };

  for (std::size_t i = 0; i < base.size(); ++i) {
    const Cedent& ant = base[i].antecedent;
    auto [it, fresh] = group_of.try_emplace(ant.rep_identity(), groups.size());
    if (fresh) {
      groups.push_back(Group{ant.size(), {}});
      for (FormulaRef f : ant) watchers[f].push_back(it->second);
    }
    groups[it->second].members.push_back(i);
  }
  for (FormulaRef f : target.antecedent) {
    state[f].hyp = true;
    offer(f);
  }

  auto fire = [&](std::size_t ci) {
    const Sequent& s = base[ci];
    if (state[s.succedent].cert) return;  // keep the first certificate
    CutPtr cd = CutDeduction::leaf(s);
    for (FormulaRef g : s.antecedent) {
      const AtomState& gs = state[g];
      if (gs.hyp) continue;  // stays in the antecedent; g is a target hypothesis
      cd = CutDeduction::cut(gs.cert, cd);
    }
    state[s.succedent].cert = std::move(cd);
    offer(s.succedent);
  };

  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    if (groups[gi].pending == 0)
      for (std::size_t ci : groups[gi].members) fire(ci);

  while (!heap.empty()) {
    if (state[goal].cert) break;
    FormulaRef p = heap.pop();
    AtomState& ps = state[p];
    if (ps.processed) continue;
    ps.processed = true;
    auto it = watchers.find(p);
    if (it == watchers.end()) continue;
    for (std::size_t gi : it->second)
      if (--groups[gi].pending == 0)
        for (std::size_t ci : groups[gi].members) fire(ci);
  }

  if (!state[goal].cert) return std::nullopt;
  return state[goal].cert;
}

}  // namespace njp
