// Natural deduction derivation trees, the local correctness check, sequent
// collection, and the s-expression file format.
#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "njp/cedent.hpp"
#include "njp/formula.hpp"

namespace njp {

enum class Rule : unsigned char { Ax, OrE, OrI0, OrI1, AndE0, AndE1, AndI, ImpE, ImpI };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::OrE: return "orE";
    case Rule::OrI0: return "orI0";
    case Rule::OrI1: return "orI1";
    case Rule::AndE0: return "andE0";
    case Rule::AndE1: return "andE1";
    case Rule::AndI: return "andI";
    case Rule::ImpE: return "impE";
    case Rule::ImpI: return "impI";
  }
  return "?";
}

inline int rule_arity(Rule r) {
  switch (r) {
    case Rule::Ax: return 0;
    case Rule::OrE: return 3;
    case Rule::AndI:
    case Rule::ImpE: return 2;
    default: return 1;
  }
}

class Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// One rule application with its conclusion sequent. Premise arity is fixed
// by the rule. Values are immutable; trees share no state with callers.
class Derivation {
 public:
  Derivation(Rule rule, Sequent conclusion, std::vector<DerivPtr> premises)
      : rule_(rule), count_(static_cast<unsigned char>(premises.size())),
        conclusion_(std::move(conclusion)) {
    if (static_cast<int>(premises.size()) != rule_arity(rule) ||
        premises.size() > 3)
      throw PreconditionError(std::string("rule ") + rule_name(rule) + " expects " +
                              std::to_string(rule_arity(rule)) + " premises");
    for (std::size_t i = 0; i < premises.size(); ++i) prem_[i] = std::move(premises[i]);
  }
  Derivation(Rule rule, Sequent conclusion)
      : rule_(rule), count_(0), conclusion_(std::move(conclusion)) {
    check_arity(rule, 0);
  }
  Derivation(Rule rule, Sequent conclusion, DerivPtr p0)
      : rule_(rule), count_(1), conclusion_(std::move(conclusion)) {
    check_arity(rule, 1);
    prem_[0] = std::move(p0);
  }
  Derivation(Rule rule, Sequent conclusion, DerivPtr p0, DerivPtr p1)
      : rule_(rule), count_(2), conclusion_(std::move(conclusion)) {
    check_arity(rule, 2);
    prem_[0] = std::move(p0);
    prem_[1] = std::move(p1);
  }
  Derivation(Rule rule, Sequent conclusion, DerivPtr p0, DerivPtr p1, DerivPtr p2)
      : rule_(rule), count_(3), conclusion_(std::move(conclusion)) {
    check_arity(rule, 3);
    prem_[0] = std::move(p0);
    prem_[1] = std::move(p1);
    prem_[2] = std::move(p2);
  }

  Rule rule() const { return rule_; }
  const Sequent& conclusion() const { return conclusion_; }
  std::size_t premise_count() const { return count_; }
  const DerivPtr& premise(std::size_t i) const { return prem_[i]; }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < count_; ++i) n += prem_[i]->node_count();
    return n;
  }

 private:
  static void check_arity(Rule rule, int got) {
    if (rule_arity(rule) != got)
      throw PreconditionError(std::string("rule ") + rule_name(rule) + " expects " +
                              std::to_string(rule_arity(rule)) + " premises");
  }
  Rule rule_;
  unsigned char count_;
  Sequent conclusion_;
  DerivPtr prem_[3];
};

inline DerivPtr make_deriv(Rule rule, Sequent conclusion, std::vector<DerivPtr> premises) {
  return std::make_shared<const Derivation>(rule, std::move(conclusion), std::move(premises));
}

// Convenience constructors used by the derivation surgery.
inline DerivPtr ax(Cedent ant, FormulaRef succ) {
  return std::make_shared<const Derivation>(Rule::Ax, Sequent(std::move(ant), succ));
}
inline DerivPtr or_i0(DerivPtr d, FormulaRef other) {
  Sequent c(d->conclusion().antecedent, Formula::disj(d->conclusion().succedent, other));
  return std::make_shared<const Derivation>(Rule::OrI0, std::move(c), std::move(d));
}
inline DerivPtr or_i1(DerivPtr d, FormulaRef other) {
  Sequent c(d->conclusion().antecedent, Formula::disj(other, d->conclusion().succedent));
  return std::make_shared<const Derivation>(Rule::OrI1, std::move(c), std::move(d));
}
inline DerivPtr and_i(DerivPtr l, DerivPtr r) {
  Sequent c(l->conclusion().antecedent,
            Formula::conj(l->conclusion().succedent, r->conclusion().succedent));
  return std::make_shared<const Derivation>(Rule::AndI, std::move(c), std::move(l), std::move(r));
}
inline DerivPtr and_e0(DerivPtr d) {
  FormulaRef s = d->conclusion().succedent;
  if (s->kind() != Formula::Kind::Conj) throw PreconditionError("andE0 premise is not a conjunction");
  Sequent c(d->conclusion().antecedent, s->left());
  return std::make_shared<const Derivation>(Rule::AndE0, std::move(c), std::move(d));
}
inline DerivPtr and_e1(DerivPtr d) {
  FormulaRef s = d->conclusion().succedent;
  if (s->kind() != Formula::Kind::Conj) throw PreconditionError("andE1 premise is not a conjunction");
  Sequent c(d->conclusion().antecedent, s->right());
  return std::make_shared<const Derivation>(Rule::AndE1, std::move(c), std::move(d));
}
inline DerivPtr imp_e(DerivPtr dimp, DerivPtr darg) {
  FormulaRef s = dimp->conclusion().succedent;
  if (s->kind() != Formula::Kind::Impl) throw PreconditionError("impE major premise is not an implication");
  Sequent c(dimp->conclusion().antecedent, s->right());
  return std::make_shared<const Derivation>(Rule::ImpE, std::move(c), std::move(dimp),
                                            std::move(darg));
}
// Discharges hyp from the premise's antecedent.
inline DerivPtr imp_i(DerivPtr d, FormulaRef hyp) {
  Sequent c(d->conclusion().antecedent.without(hyp),
            Formula::impl(hyp, d->conclusion().succedent));
  return std::make_shared<const Derivation>(Rule::ImpI, std::move(c), std::move(d));
}
// Discharges hyp over an explicit conclusion context; needed when the
// discharged formula is also an ambient hypothesis that must stay.
inline DerivPtr imp_i_over(DerivPtr d, FormulaRef hyp, Cedent conclusion_ant) {
  Sequent c(std::move(conclusion_ant), Formula::impl(hyp, d->conclusion().succedent));
  return std::make_shared<const Derivation>(Rule::ImpI, std::move(c), std::move(d));
}
inline DerivPtr or_e(DerivPtr major, DerivPtr minor0, DerivPtr minor1) {
  Sequent c(major->conclusion().antecedent, minor0->conclusion().succedent);
  return std::make_shared<const Derivation>(Rule::OrE, std::move(c), std::move(major),
                                            std::move(minor0), std::move(minor1));
}

// ---------------------------------------------------------------------------
// Local correctness.

struct CheckError {
  std::vector<int> path;  // premise indices from the root
  std::string reason;
};

inline std::string to_string(const CheckError& e) {
  std::string out = "node ";
  if (e.path.empty()) out += "root";
  for (std::size_t i = 0; i < e.path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(e.path[i]);
  }
  out += ": " + e.reason;
  return out;
}

namespace detail {

inline bool check_node(const Derivation& d, std::string& reason) {
  const Sequent& c = d.conclusion();
  const Cedent& g = c.antecedent;
  switch (d.rule()) {
    case Rule::Ax: {
      if (g.contains(c.succedent)) return true;
      if (g.contains(Formula::bottom())) {
        if (c.succedent->is_atom()) return true;
        reason = "bottom axiom succedent must be atomic";
        return false;
      }
      reason = "axiom succedent not among hypotheses";
      return false;
    }
    case Rule::OrI0:
    case Rule::OrI1: {
      if (c.succedent->kind() != Formula::Kind::Disj) {
        reason = "conclusion of or-introduction is not a disjunction";
        return false;
      }
      FormulaRef need = d.rule() == Rule::OrI0 ? c.succedent->left() : c.succedent->right();
      const Sequent& p = d.premise(0)->conclusion();
      if (p.succedent != need) { reason = "premise succedent is not the introduced disjunct"; return false; }
      if (p.antecedent != g) { reason = "antecedent mismatch"; return false; }
      return true;
    }
    case Rule::AndI: {
      if (c.succedent->kind() != Formula::Kind::Conj) {
        reason = "conclusion of and-introduction is not a conjunction";
        return false;
      }
      const Sequent& p0 = d.premise(0)->conclusion();
      const Sequent& p1 = d.premise(1)->conclusion();
      if (p0.succedent != c.succedent->left() || p1.succedent != c.succedent->right()) {
        reason = "premise succedents do not match the conjuncts";
        return false;
      }
      if (p0.antecedent != g || p1.antecedent != g) { reason = "antecedent mismatch"; return false; }
      return true;
    }
    case Rule::AndE0:
    case Rule::AndE1: {
      const Sequent& p = d.premise(0)->conclusion();
      if (p.succedent->kind() != Formula::Kind::Conj) {
        reason = "major premise is not a conjunction";
        return false;
      }
      FormulaRef got = d.rule() == Rule::AndE0 ? p.succedent->left() : p.succedent->right();
      if (c.succedent != got) { reason = "conclusion is not the projected conjunct"; return false; }
      if (p.antecedent != g) { reason = "antecedent mismatch"; return false; }
      return true;
    }
    case Rule::ImpI: {
      if (c.succedent->kind() != Formula::Kind::Impl) {
        reason = "conclusion of imp-introduction is not an implication";
        return false;
      }
      const Sequent& p = d.premise(0)->conclusion();
      if (p.succedent != c.succedent->right()) { reason = "premise succedent mismatch"; return false; }
      if (!p.antecedent.equals_with(g, c.succedent->left())) {
        reason = "premise antecedent must add exactly the discharged hypothesis";
        return false;
      }
      return true;
    }
    case Rule::ImpE: {
      const Sequent& pimp = d.premise(0)->conclusion();
      const Sequent& parg = d.premise(1)->conclusion();
      if (pimp.succedent->kind() != Formula::Kind::Impl) {
        reason = "major premise is not an implication";
        return false;
      }
      if (pimp.succedent->left() != parg.succedent) { reason = "argument premise mismatch"; return false; }
      if (pimp.succedent->right() != c.succedent) { reason = "conclusion mismatch"; return false; }
      if (pimp.antecedent != g || parg.antecedent != g) { reason = "antecedent mismatch"; return false; }
      return true;
    }
    case Rule::OrE: {
      const Sequent& major = d.premise(0)->conclusion();
      const Sequent& m0 = d.premise(1)->conclusion();
      const Sequent& m1 = d.premise(2)->conclusion();
      if (major.succedent->kind() != Formula::Kind::Disj) {
        reason = "major premise is not a disjunction";
        return false;
      }
      if (m0.succedent != c.succedent || m1.succedent != c.succedent) {
        reason = "minor premise succedent mismatch";
        return false;
      }
      if (major.antecedent != g) { reason = "antecedent mismatch"; return false; }
      if (!m0.antecedent.equals_with(g, major.succedent->left()) ||
          !m1.antecedent.equals_with(g, major.succedent->right())) {
        reason = "minor premise must add exactly its case hypothesis";
        return false;
      }
      return true;
    }
  }
  reason = "unknown rule";
  return false;
}

inline bool check_walk(const Derivation& d, std::vector<int>& path, CheckError& err) {
  for (std::size_t i = 0; i < d.premise_count(); ++i) {
    path.push_back(static_cast<int>(i));
    if (!check_walk(*d.premise(i), path, err)) return false;
    path.pop_back();
  }
  std::string reason;
  if (!check_node(d, reason)) {
    err.path = path;
    err.reason = std::move(reason);
    return false;
  }
  return true;
}

}  // namespace detail

// Returns the first failing node (premises checked before their conclusion),
// or nullopt if every node matches an axiom or rule scheme.
inline std::optional<CheckError> check_derivation(const DerivPtr& d) {
  CheckError err;
  std::vector<int> path;
  if (detail::check_walk(*d, path, err)) return std::nullopt;
  return err;
}

inline bool checks(const DerivPtr& d) { return !check_derivation(d).has_value(); }

// Distinct sequents of the derivation in first-visit (preorder) order. The
// deterministic order keeps downstream certificate construction reproducible.
inline std::vector<Sequent> sequents_of(const DerivPtr& d) {
  std::vector<Sequent> out;
  std::unordered_set<Sequent, SequentHash> seen;
  seen.reserve(d->node_count());
  auto walk = [&](auto&& self, const Derivation& n) -> void {
    if (seen.insert(n.conclusion()).second) out.push_back(n.conclusion());
    for (std::size_t i = 0; i < n.premise_count(); ++i) self(self, *n.premise(i));
  };
  walk(walk, *d);
  return out;
}

// ---------------------------------------------------------------------------
// File format: `(RULE "<sequent>" <premise>*)`, e.g.
// (orI0 "p => p | q" (ax "p => p"))

inline void print_derivation(std::ostream& os, const DerivPtr& d, int indent = 0) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad << '(' << rule_name(d->rule()) << " \"" << to_string(d->conclusion()) << '"';
  if (d->premise_count() == 0) {
    os << ')';
    return;
  }
  for (std::size_t i = 0; i < d->premise_count(); ++i) {
    os << '\n';
    print_derivation(os, d->premise(i), indent + 1);
  }
  os << ')';
}

inline std::string to_string(const DerivPtr& d) {
  std::ostringstream os;
  print_derivation(os, d);
  return os.str();
}

namespace detail {

class DerivationParser {
 public:
  explicit DerivationParser(std::string_view text) : text_(text) {}

  DerivPtr parse() {
    DerivPtr d = parse_node();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return d;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  DerivPtr parse_node() {
    expect('(');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    std::optional<Rule> rule;
    for (int r = 0; r <= static_cast<int>(Rule::ImpI); ++r)
      if (name == rule_name(static_cast<Rule>(r))) rule = static_cast<Rule>(r);
    if (!rule) throw ParseError("unknown rule '" + name + "'", start);

    expect('"');
    std::size_t qstart = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ >= text_.size()) throw ParseError("unterminated sequent string", qstart);
    Sequent seq = parse_sequent(text_.substr(qstart, pos_ - qstart));
    ++pos_;  // closing quote

    std::vector<DerivPtr> premises;
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        break;
      }
      premises.push_back(parse_node());
    }
    if (static_cast<int>(premises.size()) != rule_arity(*rule))
      throw ParseError(std::string("rule ") + rule_name(*rule) + " expects " +
                           std::to_string(rule_arity(*rule)) + " premises, got " +
                           std::to_string(premises.size()),
                       pos_);
    return make_deriv(*rule, std::move(seq), std::move(premises));
  }
};

}  // namespace detail

inline DerivPtr parse_derivation(std::string_view text) {
  return detail::DerivationParser(text).parse();
}

}  // namespace njp
