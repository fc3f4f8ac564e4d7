// Deterministic one-tape machines with the step relation folded into a
// local three-cell rule, their propositional encodings, a polynomial-size
// derivation of the halting disjunction, and the decision procedure that
// extracts the verdict from that derivation.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "njp/extract.hpp"
#include "njp/horn.hpp"
#include "njp/occurrence.hpp"
#include "njp/surgery.hpp"

namespace njp {

struct TmError : Error {
  using Error::Error;
};

// Cell symbols are small integers: 0..|T|-1 are tape symbols, the rest are
// head pairs (state, tape symbol).
class TmSpec {
 public:
  std::vector<std::string> input_symbols;  // subset of tape_symbols
  std::vector<std::string> tape_symbols;   // contains the blank "B"
  std::vector<std::string> states;
  std::string start, accept, reject;
  std::array<long long, 3> bound{0, 0, 0};  // cells of p(n) = c0 + c1 n + c2 n^2

  struct RhsToken {
    int state = -1;     // >= 0: result is a head pair with this state
    int cell = -1;      // fixed cell id (when pos_ref < 0 and state < 0)
    int tape = -1;      // fixed tape id for a pair rhs
    int pos_ref = -1;   // 0..2: copy that triple component (tape part for pairs)
  };
  struct RuleLine {
    std::array<int, 3> lhs{-1, -1, -1};  // cell ids; -1 = wildcard
    RhsToken rhs;
  };
  std::vector<RuleLine> rules;  // first match wins; default: keep the middle

  int num_tape() const { return static_cast<int>(tape_symbols.size()); }
  int num_states() const { return static_cast<int>(states.size()); }
  int num_cells() const { return num_tape() * (1 + num_states()); }
  bool is_pair(int s) const { return s >= num_tape(); }
  int pair_state(int s) const { return (s - num_tape()) / num_tape(); }
  int pair_tape(int s) const { return (s - num_tape()) % num_tape(); }
  int pair_id(int q, int a) const { return num_tape() + q * num_tape() + a; }

  int tape_id(const std::string& name) const {
    for (int i = 0; i < num_tape(); ++i)
      if (tape_symbols[i] == name) return i;
    throw TmError("unknown tape symbol '" + name + "'");
  }
  int state_id(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
      if (states[i] == name) return i;
    throw TmError("unknown state '" + name + "'");
  }
  int blank() const { return blank_; }
  int start_state() const { return state_id(start); }
  int accept_cell() const { return pair_id(state_id(accept), blank_); }
  int reject_cell() const { return pair_id(state_id(reject), blank_); }

  std::string cell_name(int s) const {
    if (!is_pair(s)) return tape_symbols[s];
    return states[pair_state(s)] + "/" + tape_symbols[pair_tape(s)];
  }

  long long step_bound(long long n) const {
    return bound[0] + bound[1] * n + bound[2] * n * n;
  }

  // The local rule. Total: unmatched triples keep their middle symbol.
  int step(int a, int b, int c) const { return table_[(a * num_cells() + b) * num_cells() + c]; }

  // Resolves rule matching into a dense table and checks the static
  // invariants (absorbing final cells).
  void finalize() {
    blank_ = tape_id("B");
    for (const std::string& s : input_symbols) tape_id(s);
    state_id(start);
    state_id(accept);
    state_id(reject);
    int n = num_cells();
    table_.assign(static_cast<std::size_t>(n) * n * n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) table_[(a * n + b) * n + c] = apply_rules(a, b, c);
    for (int fin : {accept_cell(), reject_cell()})
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
          if (step(a, fin, c) != fin)
            throw TmError("final cell " + cell_name(fin) + " is not absorbing for triple (" +
                          cell_name(a) + ", " + cell_name(fin) + ", " + cell_name(c) + ")");
  }

 private:
  int blank_ = 0;
  std::vector<int> table_;

  int apply_rules(int a, int b, int c) const {
    std::array<int, 3> triple{a, b, c};
    for (const RuleLine& r : rules) {
      bool match = true;
      for (int i = 0; i < 3; ++i)
        if (r.lhs[i] >= 0 && r.lhs[i] != triple[i]) match = false;
      if (!match) continue;
      const RhsToken& t = r.rhs;
      if (t.state < 0 && t.pos_ref >= 0) return triple[t.pos_ref];
      if (t.state < 0) return t.cell;
      if (t.pos_ref >= 0) {
        // `q/$k` needs a plain symbol at component k; otherwise the rule
        // does not apply and later rules (or the default) take over.
        if (is_pair(triple[t.pos_ref])) continue;
        return pair_id(t.state, triple[t.pos_ref]);
      }
      return pair_id(t.state, t.tape);
    }
    return b;
  }
};

// ---------------------------------------------------------------------------
// Machine description files.
//
//   states: e o sa sr          input: 0 1        tape: 0 1 B
//   start: e                   accept: sa        reject: sr
//   bound: 1 1 0               (cells of c0 + c1*n + c2*n^2)
//   a b c -> d                 one line per rule; `q/a` head pairs, `*`
//                              wildcards on the left, `$k` / `q/$k` copies
//                              of triple component k on the right; first
//                              match wins, unmatched triples keep their
//                              middle symbol.

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline bool valid_symbol_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

inline int parse_cell_token(const TmSpec& m, const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos) return m.tape_id(tok);
  return m.pair_id(m.state_id(tok.substr(0, slash)), m.tape_id(tok.substr(slash + 1)));
}

}  // namespace detail

inline TmSpec parse_tm_spec(const std::string& text) {
  TmSpec m;
  std::vector<std::string> rule_lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    auto rest = [&](std::vector<std::string>& dst) { dst.assign(toks.begin() + 1, toks.end()); };
    if (head == "states:") rest(m.states);
    else if (head == "input:") rest(m.input_symbols);
    else if (head == "tape:") rest(m.tape_symbols);
    else if (head == "start:" && toks.size() == 2) m.start = toks[1];
    else if (head == "accept:" && toks.size() == 2) m.accept = toks[1];
    else if (head == "reject:" && toks.size() == 2) m.reject = toks[1];
    else if (head == "bound:" && toks.size() == 4) {
      m.bound = {std::stoll(toks[1]), std::stoll(toks[2]), std::stoll(toks[3])};
    } else {
      rule_lines.push_back(line);
    }
  }
  for (const std::string& s : m.tape_symbols)
    if (!detail::valid_symbol_name(s)) throw TmError("invalid tape symbol '" + s + "'");
  for (const std::string& s : m.states)
    if (!detail::valid_symbol_name(s)) throw TmError("invalid state name '" + s + "'");
  for (const std::string& raw : rule_lines) {
    auto toks = detail::split_ws(raw);
    if (toks.size() != 5 || toks[3] != "->")
      throw TmError("malformed rule line '" + raw + "'");
    TmSpec::RuleLine r;
    for (int i = 0; i < 3; ++i)
      r.lhs[i] = toks[i] == "*" ? -1 : detail::parse_cell_token(m, toks[i]);
    const std::string& d = toks[4];
    auto slash = d.find('/');
    if (d.size() == 2 && d[0] == '$') {
      r.rhs.pos_ref = d[1] - '1';
      if (r.rhs.pos_ref < 0 || r.rhs.pos_ref > 2) throw TmError("bad position reference '" + d + "'");
    } else if (slash != std::string::npos) {
      r.rhs.state = m.state_id(d.substr(0, slash));
      std::string t = d.substr(slash + 1);
      if (t.size() == 2 && t[0] == '$') {
        r.rhs.pos_ref = t[1] - '1';
        if (r.rhs.pos_ref < 0 || r.rhs.pos_ref > 2) throw TmError("bad position reference '" + d + "'");
      } else {
        r.rhs.tape = m.tape_id(t);
      }
    } else {
      r.rhs.cell = m.tape_id(d);
    }
    m.rules.push_back(r);
  }
  m.finalize();
  return m;
}

inline std::vector<int> parse_tm_input(const TmSpec& m, const std::string& x) {
  std::vector<int> out;
  for (char c : x) {
    std::string s(1, c);
    bool found = false;
    for (const std::string& sym : m.input_symbols)
      if (sym == s) {
        out.push_back(m.tape_id(sym));
        found = true;
      }
    if (!found) throw TmError("input symbol '" + s + "' is not in the input alphabet");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation.

struct TmComputation {
  long long ell = 0;
  std::vector<std::vector<int>> ids;  // rows 0..ell, cells 0..ell+1

  int final_cell() const { return ids.back()[1]; }
};

inline TmComputation simulate(const TmSpec& m, const std::vector<int>& x) {
  long long n = static_cast<long long>(x.size());
  if (n < 1) throw TmError("input must be nonempty");
  long long ell = m.step_bound(n);
  if (ell < n) throw TmError("step bound is smaller than the input length");

  TmComputation comp;
  comp.ell = ell;
  std::vector<int> row(static_cast<std::size_t>(ell) + 2, m.blank());
  row[1] = m.pair_id(m.start_state(), x[0]);
  for (long long i = 2; i <= n; ++i) row[static_cast<std::size_t>(i)] = x[i - 1];
  comp.ids.push_back(row);

  auto check_row = [&](const std::vector<int>& r, long long t) {
    int heads = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (m.is_pair(r[i])) {
        ++heads;
        if (i == 0)
          throw TmError("head escaped to position 0 at step " + std::to_string(t));
      }
    if (heads != 1)
      throw TmError("configuration at step " + std::to_string(t) + " has " +
                    std::to_string(heads) + " head symbols");
  };
  check_row(row, 0);

  for (long long t = 0; t < ell; ++t) {
    const std::vector<int>& prev = comp.ids.back();
    std::vector<int> next(prev.size(), m.blank());
    for (long long i = 1; i <= ell; ++i) {
      std::size_t j = static_cast<std::size_t>(i);
      next[j] = m.step(prev[j - 1], prev[j], prev[j + 1]);
    }
    check_row(next, t + 1);
    comp.ids.push_back(std::move(next));
  }
  int fin = comp.final_cell();
  if (fin != m.accept_cell() && fin != m.reject_cell())
    throw TmError("machine did not reach a final cell at position 1 within the bound");
  return comp;
}

inline std::string to_string(const TmSpec& m, const TmComputation& comp) {
  std::string out;
  for (std::size_t t = 0; t < comp.ids.size(); ++t) {
    out += "t=" + std::to_string(t) + ":";
    for (int s : comp.ids[t]) out += " " + m.cell_name(s);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Encoding.

struct TmEncoding {
  const TmSpec* spec = nullptr;
  long long n = 0, ell = 0;

  FormulaRef beta = nullptr;
  std::vector<FormulaRef> delta;  // delta[0] uses exclusive-or input blocks
  FormulaRef gamma_excl = nullptr;
  FormulaRef alpha_neg = nullptr;
  Cedent big_gamma;  // {beta} + every delta
  Cedent delta_big;  // big_gamma + {gamma_excl, alpha_neg}
  FormulaRef acc_atom = nullptr;
  FormulaRef rej_atom = nullptr;

  // spine disjunction of an input block -> (position, spine index)
  std::map<FormulaRef, std::pair<long long, int>> spine_info;

  FormulaRef atom(int cell, long long i, long long t) const {
    std::string name = "P_";
    const TmSpec& m = *spec;
    if (m.is_pair(cell))
      name += m.states[m.pair_state(cell)] + "_" + m.tape_symbols[m.pair_tape(cell)];
    else
      name += m.tape_symbols[cell];
    name += "_" + std::to_string(i) + "_" + std::to_string(t);
    return Formula::atom(name);
  }

  std::size_t total_size() const {
    std::size_t s = beta->size() + gamma_excl->size() + alpha_neg->size();
    for (FormulaRef d : delta) s += d->size();
    return s;
  }
};

namespace detail {

inline FormulaRef conj_all(const std::vector<FormulaRef>& fs) {
  if (fs.empty()) throw PreconditionError("empty conjunction");
  FormulaRef acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::conj(fs[i], acc);
  return acc;
}

inline FormulaRef disj_all(const std::vector<FormulaRef>& fs) {
  if (fs.empty()) throw PreconditionError("empty disjunction");
  FormulaRef acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::disj(fs[i], acc);
  return acc;
}

// One disjunct of an exclusive-or block: the chosen atom plus the negations
// of its alternatives.
inline FormulaRef xor_bracket(const std::vector<FormulaRef>& ps, std::size_t i) {
  std::vector<FormulaRef> parts{ps[i]};
  for (std::size_t j = 0; j < ps.size(); ++j)
    if (j != i) parts.push_back(Formula::neg(ps[j]));
  return conj_all(parts);
}

inline FormulaRef exclusive_or(const std::vector<FormulaRef>& ps) {
  std::vector<FormulaRef> brackets;
  for (std::size_t i = 0; i < ps.size(); ++i) brackets.push_back(xor_bracket(ps, i));
  return disj_all(brackets);
}

}  // namespace detail

inline TmEncoding encode(const TmSpec& m, long long n) {
  if (n < 1) throw TmError("input length must be at least 1");
  long long ell = m.step_bound(n);
  if (ell < n) throw TmError("step bound is smaller than the input length");
  TmEncoding e;
  e.spec = &m;
  e.n = n;
  e.ell = ell;
  int S = m.num_cells();

  // beta: positions 0 and ell+1 are blank at every time.
  {
    std::vector<FormulaRef> parts;
    for (long long t = 0; t <= ell; ++t)
      parts.push_back(Formula::conj(e.atom(m.blank(), 0, t), e.atom(m.blank(), ell + 1, t)));
    e.beta = detail::conj_all(parts);
  }

  // delta[0]: exclusive-or over the input alphabet at positions 1..n (the
  // head pair at position 1), blanks beyond.
  {
    std::vector<FormulaRef> parts;
    for (long long i = 1; i <= n; ++i) {
      std::vector<FormulaRef> ps;
      for (const std::string& sym : m.input_symbols) {
        int a = m.tape_id(sym);
        ps.push_back(e.atom(i == 1 ? m.pair_id(m.start_state(), a) : a, i, 0));
      }
      if (ps.size() == 1) {
        parts.push_back(ps[0]);
        continue;
      }
      std::vector<FormulaRef> brackets;
      for (std::size_t s = 0; s < ps.size(); ++s) brackets.push_back(detail::xor_bracket(ps, s));
      // Record the spine nodes so that input words map onto choice bits.
      FormulaRef acc = brackets.back();
      std::vector<FormulaRef> spine;
      for (std::size_t s = brackets.size() - 1; s-- > 0;) {
        acc = Formula::disj(brackets[s], acc);
        spine.push_back(acc);
      }
      for (std::size_t k = 0; k < spine.size(); ++k)
        e.spine_info[spine[spine.size() - 1 - k]] = {i, static_cast<int>(k)};
      parts.push_back(acc);
    }
    for (long long i = n + 1; i <= ell; ++i) parts.push_back(e.atom(m.blank(), i, 0));
    e.delta.push_back(detail::conj_all(parts));
  }

  // delta[t+1]: the local rule as implications, one per position and
  // symbol triple, grouped per position and nested per triple component.
  for (long long t = 0; t < ell; ++t) {
    std::vector<FormulaRef> blocks;
    for (long long i = 1; i <= ell; ++i) {
      std::vector<FormulaRef> per_a;
      for (int a = 0; a < S; ++a) {
        std::vector<FormulaRef> per_b;
        for (int b = 0; b < S; ++b) {
          std::vector<FormulaRef> per_c;
          for (int c = 0; c < S; ++c) {
            FormulaRef lhs = Formula::conj(
                e.atom(a, i - 1, t),
                Formula::conj(e.atom(b, i, t), e.atom(c, i + 1, t)));
            per_c.push_back(Formula::impl(lhs, e.atom(m.step(a, b, c), i, t + 1)));
          }
          per_b.push_back(detail::conj_all(per_c));
        }
        per_a.push_back(detail::conj_all(per_b));
      }
      blocks.push_back(detail::conj_all(per_a));
    }
    e.delta.push_back(detail::conj_all(blocks));
  }

  e.acc_atom = e.atom(m.accept_cell(), 1, ell);
  e.rej_atom = e.atom(m.reject_cell(), 1, ell);

  // gamma: every non-final cell symbol is excluded at position 1 at the end.
  {
    std::vector<FormulaRef> parts;
    for (int s = 0; s < S; ++s)
      if (s != m.accept_cell() && s != m.reject_cell())
        parts.push_back(Formula::neg(e.atom(s, 1, ell)));
    e.gamma_excl = detail::conj_all(parts);
  }

  e.alpha_neg = Formula::neg(Formula::conj(e.acc_atom, e.rej_atom));

  std::vector<FormulaRef> gfs{e.beta};
  for (FormulaRef d : e.delta) gfs.push_back(d);
  e.big_gamma = Cedent(gfs.begin(), gfs.end());
  gfs.push_back(e.gamma_excl);
  gfs.push_back(e.alpha_neg);
  e.delta_big = Cedent(gfs.begin(), gfs.end());
  return e;
}

// The input-fixed initial formula: plain atoms instead of exclusive-ors.
inline FormulaRef encode_initial(const TmEncoding& e, const std::vector<int>& x) {
  const TmSpec& m = *e.spec;
  std::vector<FormulaRef> parts;
  parts.push_back(e.atom(m.pair_id(m.start_state(), x[0]), 1, 0));
  for (long long i = 2; i <= e.n; ++i) parts.push_back(e.atom(x[i - 1], i, 0));
  for (long long i = e.n + 1; i <= e.ell; ++i) parts.push_back(e.atom(m.blank(), i, 0));
  return detail::conj_all(parts);
}

// The cedent {beta, delta0(x)} + {delta_s : 0 < s <= t}; every member is a
// conjunction of Horn clauses.
inline Cedent encode_input(const TmEncoding& e, const std::vector<int>& x, long long t) {
  if (static_cast<long long>(x.size()) != e.n) throw TmError("input length mismatch");
  if (t > e.ell) throw TmError("time exceeds the step bound");
  std::vector<FormulaRef> fs{e.beta, encode_initial(e, x)};
  for (long long s = 1; s <= t; ++s) fs.push_back(e.delta[static_cast<std::size_t>(s)]);
  return Cedent(fs.begin(), fs.end());
}

inline Cedent encode_input(const TmSpec& m, const std::vector<int>& x, long long t) {
  TmEncoding e = encode(m, static_cast<long long>(x.size()));
  return encode_input(e, x, t);
}

// The choice vector over spd_enumerate(delta_big) that picks, inside each
// input block, the bracket naming that input symbol.
inline ChoiceVector input_to_choices(const TmEncoding& e, const std::vector<int>& x) {
  if (static_cast<long long>(x.size()) != e.n) throw TmError("input length mismatch");
  const TmSpec& m = *e.spec;
  std::vector<int> element(static_cast<std::size_t>(e.n) + 1, 0);
  for (long long i = 1; i <= e.n; ++i) {
    int el = -1;
    for (std::size_t s = 0; s < m.input_symbols.size(); ++s)
      if (m.tape_id(m.input_symbols[s]) == x[static_cast<std::size_t>(i - 1)])
        el = static_cast<int>(s);
    if (el < 0) throw TmError("input symbol outside the input alphabet");
    element[static_cast<std::size_t>(i)] = el;
  }
  SpdEnumeration en = spd_enumerate(e.delta_big);
  ChoiceVector k;
  for (const SpdOccurrence& occ : en.occurrences) {
    auto it = e.spine_info.find(occ.disjunction);
    if (it == e.spine_info.end())
      throw TmError("unexpected strictly positive disjunction outside the input blocks");
    auto [pos, spine_idx] = it->second;
    k.bits.push_back(element[static_cast<std::size_t>(pos)] > spine_idx ? 1 : 0);
  }
  return k;
}

inline ChoiceVector input_to_choices(const TmSpec& m, long long n, const std::vector<int>& x) {
  TmEncoding e = encode(m, n);
  return input_to_choices(e, x);
}

// ---------------------------------------------------------------------------
// The halting-disjunction derivation.

namespace detail {

// A right-nested disjunction list with its suffix formulas.
struct DisjList {
  std::vector<FormulaRef> elems;
  std::vector<FormulaRef> suffixes;  // suffixes[j] = elems[j] | suffixes[j+1]

  explicit DisjList(std::vector<FormulaRef> es) : elems(std::move(es)) {
    suffixes.resize(elems.size());
    suffixes.back() = elems.back();
    for (std::size_t j = elems.size() - 1; j-- > 0;)
      suffixes[j] = Formula::disj(elems[j], suffixes[j + 1]);
  }
  FormulaRef whole() const { return suffixes.front(); }
};

// Projects element `index` out of a derivation of a right-nested
// conjunction list of `len` elements.
inline DerivPtr project_element(DerivPtr d, std::size_t index, std::size_t len) {
  for (std::size_t j = 0; j < index; ++j) d = and_e1(d);
  if (index + 1 < len) d = and_e0(d);
  return d;
}

// Derivation of ctx => whole-list from a derivation of element `index`.
inline DerivPtr inject_disjunct(DerivPtr d, std::size_t index, const DisjList& list) {
  if (index + 1 < list.elems.size()) d = or_i0(d, list.suffixes[index + 1]);
  for (std::size_t j = index; j-- > 0;) d = or_i1(d, list.elems[j]);
  return d;
}

// Discharges hypothesis h from body (ctx+h => goal) and applies h_der
// (ctx => h); yields ctx => goal.
inline DerivPtr cut_in(FormulaRef h, const DerivPtr& h_der, const DerivPtr& body) {
  if (h_der->conclusion().antecedent.contains(h)) return body;
  return imp_e(imp_i(body, h), h_der);
}

// Case analysis over a right-nested disjunction. make_case(idx, ctx2,
// deriver) must return ctx2 => goal, where deriver(ctx3) yields
// ctx3 => elems[idx] in any extension ctx3 of ctx2.
template <typename MakeCase>
DerivPtr case_split(const Cedent& ctx, const DerivPtr& major, const DisjList& list,
                    const MakeCase& make_case, std::size_t j = 0) {
  using Deriver = std::function<DerivPtr(const Cedent&)>;
  if (j + 1 == list.elems.size()) {
    // Last element: the "disjunction" is the element itself.
    Deriver deriver = [f = list.elems[j], &major, &ctx](const Cedent& c) -> DerivPtr {
      if (c == major->conclusion().antecedent) return major;
      return ax(c, f);  // only reached when the element is a hypothesis
    };
    return make_case(j, ctx, deriver);
  }
  FormulaRef elem = list.elems[j];
  Cedent ctx0 = ctx.with(elem);
  Deriver hyp_deriver = [elem](const Cedent& c) { return ax(c, elem); };
  DerivPtr minor0 = make_case(j, ctx0, hyp_deriver);
  FormulaRef rest = list.suffixes[j + 1];
  Cedent ctx1 = ctx.with(rest);
  DerivPtr minor1 = case_split(ctx1, ax(ctx1, rest), list, make_case, j + 1);
  return or_e(major, minor0, minor1);
}

class HaltingDerivationBuilder {
 public:
  explicit HaltingDerivationBuilder(const TmEncoding& e)
      : e_(e), m_(*e.spec), S_(m_.num_cells()) {}

  DerivPtr build() {
    std::size_t ell = static_cast<std::size_t>(e_.ell);
    // Cell disjunction lists D(i,t) and the stage formulas alpha_t.
    cell_lists_.resize(ell + 1);
    alpha_.resize(ell + 1);
    for (std::size_t t = 0; t <= ell; ++t) {
      std::vector<FormulaRef> stage;
      for (long long i = 1; i <= e_.ell; ++i) {
        std::vector<FormulaRef> elems;
        for (int s = 0; s < S_; ++s) elems.push_back(e_.atom(s, i, static_cast<long long>(t)));
        cell_lists_[t].emplace_back(std::move(elems));
        stage.push_back(cell_lists_[t].back().whole());
      }
      alpha_[t] = conj_all(stage);
    }

    DerivPtr cur = initial_stage();
    for (std::size_t t = 0; t < ell; ++t)
      cur = cut_in(alpha_[t], cur, step_stage(t));
    return final_stage(cur);
  }

 private:
  const TmEncoding& e_;
  const TmSpec& m_;
  int S_;
  std::vector<std::vector<DisjList>> cell_lists_;  // [t][i-1]
  std::vector<FormulaRef> alpha_;

  std::size_t ell() const { return static_cast<std::size_t>(e_.ell); }

  // beta-projection: ctx => P(B, side, t) with side 0 or ell+1.
  DerivPtr blank_atom(const Cedent& ctx, bool right_side, std::size_t t) const {
    DerivPtr d = project_element(ax(ctx, e_.beta), t, ell() + 1);
    return right_side ? and_e1(d) : and_e0(d);
  }

  // Derivation of Delta => alpha_0 by case analysis on the input blocks.
  DerivPtr initial_stage() {
    const Cedent& ctx = e_.delta_big;
    FormulaRef delta0 = e_.delta[0];
    std::vector<DerivPtr> cells;
    for (long long i = 1; i <= e_.ell; ++i) {
      DerivPtr block = project_element(ax(ctx, delta0), static_cast<std::size_t>(i - 1),
                                       static_cast<std::size_t>(e_.ell));
      const DisjList& goal_list = cell_lists_[0][static_cast<std::size_t>(i - 1)];
      if (i > e_.n) {
        // Blank region: delta0 supplies the atom directly.
        cells.push_back(inject_disjunct(block, static_cast<std::size_t>(m_.blank()), goal_list));
        continue;
      }
      // Input block: split on the exclusive-or and project the atom out of
      // the chosen bracket.
      std::vector<FormulaRef> brackets, atoms;
      std::vector<int> cell_ids;
      for (const std::string& sym : m_.input_symbols) {
        int a = m_.tape_id(sym);
        int cell = i == 1 ? m_.pair_id(m_.start_state(), a) : a;
        cell_ids.push_back(cell);
        atoms.push_back(e_.atom(cell, i, 0));
      }
      for (std::size_t s = 0; s < atoms.size(); ++s)
        brackets.push_back(atoms.size() == 1 ? atoms[s] : xor_bracket(atoms, s));
      DisjList block_list(brackets);
      auto make_case = [&](std::size_t s, const Cedent& ctx2, const auto& deriver) {
        DerivPtr bracket_der = deriver(ctx2);
        DerivPtr atom_der = atoms.size() == 1 ? bracket_der : and_e0(bracket_der);
        return inject_disjunct(atom_der, static_cast<std::size_t>(cell_ids[s]), goal_list);
      };
      cells.push_back(atoms.size() == 1
                          ? make_case(0, ctx, [&](const Cedent&) { return block; })
                          : case_split(ctx, block, block_list, make_case));
    }
    return fold_stage(cells);
  }

  // Derivation of alpha_t, Delta => alpha_{t+1}.
  DerivPtr step_stage(std::size_t t) {
    Cedent ctx = e_.delta_big.with(alpha_[t]);
    FormulaRef delta_next = e_.delta[t + 1];
    std::vector<DerivPtr> cells;
    for (long long i = 1; i <= e_.ell; ++i)
      cells.push_back(cell_stage(ctx, t, i, delta_next));
    DerivPtr body = fold_stage(cells);
    return body;  // hypothesis alpha_t is discharged by the caller via cut_in
  }

  // ctx => D(i, t+1): condition on the three neighbor cells and apply the
  // matching implication of delta_{t+1}.
  DerivPtr cell_stage(const Cedent& ctx, std::size_t t, long long i, FormulaRef delta_next) {
    FormulaRef block_i = conj_list_element(delta_next, static_cast<std::size_t>(i - 1),
                                           static_cast<std::size_t>(e_.ell));
    DerivPtr block_der = project_element(ax(ctx, delta_next), static_cast<std::size_t>(i - 1),
                                         static_cast<std::size_t>(e_.ell));
    Cedent ctx_b = ctx.with(block_i);
    DerivPtr inner = triple_split(ctx_b, t, i, block_i);
    return cut_in(block_i, block_der, inner);
  }

  // Fetches the j-th element formula of a right-nested conjunction list.
  static FormulaRef conj_list_element(FormulaRef list, std::size_t index, std::size_t len) {
    for (std::size_t j = 0; j < index; ++j) list = list->right();
    return index + 1 < len ? list->left() : list;
  }

  using Deriver = std::function<DerivPtr(const Cedent&)>;

  // Major premise for conditioning on cell (pos, t): the alpha_t hypothesis
  // projected to that position.
  DerivPtr neighbor_major(const Cedent& ctx, std::size_t t, long long pos) const {
    return project_element(ax(ctx, alpha_[t]), static_cast<std::size_t>(pos - 1),
                           static_cast<std::size_t>(e_.ell));
  }

  DerivPtr triple_split(const Cedent& ctx, std::size_t t, long long i, FormulaRef block_i) {
    const DisjList& goal_list = cell_lists_[t + 1][static_cast<std::size_t>(i - 1)];

    auto leaf = [&](const Cedent& c, int a, int b, int cc, const Deriver& da, const Deriver& db,
                    const Deriver& dc, FormulaRef block_ab) -> DerivPtr {
      DerivPtr impl_der = project_element(ax(c, block_ab), static_cast<std::size_t>(cc),
                                          static_cast<std::size_t>(S_));
      DerivPtr arg = and_i(da(c), and_i(db(c), dc(c)));
      DerivPtr out = imp_e(impl_der, arg);
      int f = m_.step(a, b, cc);
      return inject_disjunct(out, static_cast<std::size_t>(f), goal_list);
    };

    // Innermost: condition on the right neighbor (or use the beta blank).
    auto with_c = [&](const Cedent& c, int a, int b, const Deriver& da, const Deriver& db,
                      FormulaRef block_ab) -> DerivPtr {
      if (i == e_.ell) {
        Deriver dc = [this, t](const Cedent& cc2) { return blank_atom(cc2, true, t); };
        return leaf(c, a, b, m_.blank(), da, db, dc, block_ab);
      }
      const DisjList& clist = cell_lists_[t][static_cast<std::size_t>(i)];
      auto mc = [&](std::size_t cc, const Cedent& c2, const auto& deriver) {
        Deriver dc = [deriver](const Cedent& c3) { return deriver(c3); };
        return leaf(c2, a, b, static_cast<int>(cc), da, db, dc, block_ab);
      };
      return case_split(c, neighbor_major(c, t, i + 1), clist, mc);
    };

    // Middle: condition on the cell itself, narrowing block_a to block_ab.
    auto with_b = [&](const Cedent& c, int a, const Deriver& da, FormulaRef block_a) -> DerivPtr {
      const DisjList& blist = cell_lists_[t][static_cast<std::size_t>(i - 1)];
      auto mb = [&](std::size_t b, const Cedent& c2, const auto& deriver) {
        FormulaRef block_ab = conj_list_element(block_a, b, static_cast<std::size_t>(S_));
        DerivPtr ab_der = project_element(ax(c2, block_a), b, static_cast<std::size_t>(S_));
        Cedent c3 = c2.with(block_ab);
        Deriver db = [deriver](const Cedent& c4) { return deriver(c4); };
        DerivPtr body = with_c(c3, a, static_cast<int>(b), da, db, block_ab);
        return cut_in(block_ab, ab_der, body);
      };
      return case_split(c, neighbor_major(c, t, i), blist, mb);
    };

    // Outermost: condition on the left neighbor (or use the beta blank).
    if (i == 1) {
      Deriver da = [this, t](const Cedent& c2) { return blank_atom(c2, false, t); };
      int a = m_.blank();
      FormulaRef block_a = conj_list_element(block_i, static_cast<std::size_t>(a),
                                             static_cast<std::size_t>(S_));
      DerivPtr a_der = project_element(ax(ctx, block_i), static_cast<std::size_t>(a),
                                       static_cast<std::size_t>(S_));
      Cedent ctx2 = ctx.with(block_a);
      DerivPtr body = with_b(ctx2, a, da, block_a);
      return cut_in(block_a, a_der, body);
    }
    const DisjList& alist = cell_lists_[t][static_cast<std::size_t>(i - 2)];
    auto ma = [&](std::size_t a, const Cedent& c2, const auto& deriver) {
      FormulaRef block_a = conj_list_element(block_i, a, static_cast<std::size_t>(S_));
      DerivPtr a_der = project_element(ax(c2, block_i), a, static_cast<std::size_t>(S_));
      Cedent c3 = c2.with(block_a);
      Deriver da = [deriver](const Cedent& c4) { return deriver(c4); };
      DerivPtr body = with_b(c3, static_cast<int>(a), da, block_a);
      return cut_in(block_a, a_der, body);
    };
    return case_split(ctx, neighbor_major(ctx, t, i - 1), alist, ma);
  }

  // Right-nested and-introduction of the per-position derivations.
  static DerivPtr fold_stage(const std::vector<DerivPtr>& cells) {
    DerivPtr cur = cells.back();
    for (std::size_t j = cells.size() - 1; j-- > 0;) cur = and_i(cells[j], cur);
    return cur;
  }

  // From Delta => alpha_ell to Delta => acc | rej via gamma.
  DerivPtr final_stage(const DerivPtr& d_ell) {
    const Cedent& ctx = e_.delta_big;
    DerivPtr d1 = project_element(d_ell, 0, static_cast<std::size_t>(e_.ell));
    const DisjList& list = cell_lists_[ell()][0];
    FormulaRef goal = Formula::disj(e_.acc_atom, e_.rej_atom);

    int acc = m_.accept_cell(), rej = m_.reject_cell();
    std::vector<int> other;  // gamma's element order
    for (int s = 0; s < S_; ++s)
      if (s != acc && s != rej) other.push_back(s);

    auto make_case = [&](std::size_t s, const Cedent& ctx2, const auto& deriver) -> DerivPtr {
      int cell = static_cast<int>(s);
      if (cell == acc) return or_i0(deriver(ctx2), e_.rej_atom);
      if (cell == rej) return or_i1(deriver(ctx2), e_.acc_atom);
      std::size_t gi = 0;
      while (other[gi] != cell) ++gi;
      DerivPtr neg = project_element(ax(ctx2, e_.gamma_excl), gi, other.size());
      DerivPtr bottom = imp_e(neg, deriver(ctx2));
      return ex_falso(bottom, goal);
    };
    return case_split(ctx, d1, list, make_case);
  }
};

}  // namespace detail

// Builds and returns the derivation of Delta => acc | rej. Node count is
// polynomial in n for a fixed machine.
inline DerivPtr build_halting_derivation(const TmEncoding& e) {
  return detail::HaltingDerivationBuilder(e).build();
}

inline DerivPtr build_halting_derivation(const TmSpec& m, long long n) {
  TmEncoding e = encode(m, n);
  return build_halting_derivation(e);
}

// ---------------------------------------------------------------------------
// Decision procedure and the cell-by-cell propagation check.

struct TmArtifacts {
  TmEncoding enc;
  DerivPtr derivation;
};

inline TmArtifacts prepare_decision(const TmSpec& m, long long n) {
  TmArtifacts art;
  art.enc = encode(m, n);
  art.derivation = build_halting_derivation(art.enc);
  if (auto err = check_derivation(art.derivation))
    throw TmError("halting derivation does not check: " + to_string(*err));
  return art;
}

// Extraction-based acceptance: strengthen by the input's choices, extract,
// accept iff the accepting disjunct was extracted. The shared derivation is
// validated once in prepare_decision; the strengthened rewrite is checked
// per input inside the extraction.
inline ExtractionResult decide_extraction(const TmArtifacts& art, const std::vector<int>& x) {
  ChoiceVector k = input_to_choices(art.enc, x);
  SpdEnumeration e = spd_enumerate(art.derivation->conclusion().antecedent);
  DerivPtr dk = apply_choices(art.derivation, e, k);
  ExtractionResult res = extract_direct(dk);
  res.method = ExtractionResult::Method::Choice;
  res.choices = k;
  return res;
}

inline bool decide_with(const TmArtifacts& art, const std::vector<int>& x) {
  return decide_extraction(art, x).index == 0;
}

inline bool decide(const TmSpec& m, const std::vector<int>& x) {
  TmArtifacts art = prepare_decision(m, static_cast<long long>(x.size()));
  return decide_with(art, x);
}

// Unit propagation over the clauses of the input encoding derives exactly
// the cell atoms of the simulated run, for every time bound.
inline bool check_cell_atoms(const TmSpec& m, const std::vector<int>& x) {
  TmEncoding e = encode(m, static_cast<long long>(x.size()));
  TmComputation comp = simulate(m, x);
  for (long long t = 0; t <= e.ell; ++t) {
    HornClauseSet clauses = horn_clauses_of(encode_input(e, x, t));
    auto derived = unit_closure(clauses);
    for (long long i = 0; i <= e.ell + 1; ++i) {
      int actual = comp.ids[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      for (int s = 0; s < m.num_cells(); ++s) {
        bool expect = s == actual;
        if (derived.count(e.atom(s, i, t)) != static_cast<std::size_t>(expect)) return false;
      }
    }
  }
  return true;
}

// The satisfying assignment induced by a run: P(a,i,t) true iff cell (i,t)
// holds a.
inline std::map<FormulaRef, bool> computation_assignment(const TmEncoding& e,
                                                         const TmComputation& comp) {
  std::map<FormulaRef, bool> out;
  for (long long t = 0; t <= e.ell; ++t)
    for (long long i = 0; i <= e.ell + 1; ++i) {
      int actual = comp.ids[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      out[e.atom(actual, i, t)] = true;
    }
  return out;
}

}  // namespace njp
