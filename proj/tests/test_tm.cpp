#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "njp/oracle.hpp"
#include "njp/tm.hpp"

using namespace njp;

namespace {

const char* kM1 = R"(
states: s0 sa sr
input: 0 1
tape: 0 1 B
start: s0
accept: sa
reject: sr
bound: 1 1 0
* s0/1 * -> sa/B
* s0/0 * -> sr/B
* sa/B * -> sa/B
* sr/B * -> sr/B
)";

const char* kParity = R"(
states: e o sa sr
input: 0 1
tape: 0 1 B
start: e
accept: sa
reject: sr
bound: 1 1 0
* e/0 * -> e/$3
* e/1 * -> o/$3
* o/0 * -> o/$3
* o/1 * -> e/$3
* e/B * -> sa/B
* o/B * -> sr/B
* sa/B * -> sa/B
* sr/B * -> sr/B
* * * -> $3
)";

const TmSpec& m1() {
  static TmSpec m = parse_tm_spec(kM1);
  return m;
}
const TmSpec& parity() {
  static TmSpec m = parse_tm_spec(kParity);
  return m;
}

}  // namespace

TEST_CASE("simulation of the unit machine") {
  {
    TmComputation c = simulate(m1(), parse_tm_input(m1(), "1"));
    CHECK(c.ell == 2);
    CHECK(c.ids[2][1] == m1().accept_cell());
  }
  {
    TmComputation c = simulate(m1(), parse_tm_input(m1(), "0"));
    CHECK(c.ids[2][1] == m1().reject_cell());
  }
  {
    TmComputation c = simulate(parity(), parse_tm_input(parity(), "1101"));
    for (const auto& row : c.ids) {
      CHECK(row.front() == parity().blank());
      CHECK(row.back() == parity().blank());
      int heads = 0;
      for (int s : row)
        if (parity().is_pair(s)) ++heads;
      CHECK(heads == 1);
    }
    CHECK(c.final_cell() == parity().reject_cell());
  }
}

TEST_CASE("machine files validate their invariants") {
  CHECK_THROWS_AS(parse_tm_spec("states: a b\ninput: 0\ntape: 0 B\nstart: a\n"
                                "accept: a\nreject: b\nbound: 1 1 0\n"
                                "* a/B * -> b/B\n"),
                  TmError);  // accept cell not absorbing
  CHECK_THROWS_AS(parse_tm_input(m1(), "2"), TmError);
  CHECK_THROWS_AS(simulate(m1(), std::vector<int>{}), TmError);
}

TEST_CASE("encoding shape") {
  TmEncoding e = encode(m1(), 1);
  CHECK(e.ell == 2);
  // beta contains the blank pair for every time.
  HornClauseSet beta_clauses;
  horn_clauses_of(e.beta, beta_clauses.clauses);
  auto derived = unit_closure(beta_clauses);
  for (long long t = 0; t <= e.ell; ++t) {
    CHECK(derived.count(e.atom(m1().blank(), 0, t)) == 1);
    CHECK(derived.count(e.atom(m1().blank(), e.ell + 1, t)) == 1);
  }
  // One implication per position and symbol triple in each step formula.
  int S = m1().num_cells();
  std::vector<HornClause> step_clauses;
  horn_clauses_of(e.delta[1], step_clauses);
  CHECK(step_clauses.size() == static_cast<std::size_t>(e.ell) * S * S * S);
  // The input block sits at position 1 only for words of length 1.
  SpdEnumeration en = spd_enumerate(e.delta_big);
  CHECK(en.count() == 1);
  CHECK(en.occurrences[0].path.formula_index == e.delta_big.index_of(e.delta[0]));
}

TEST_CASE("input cedents") {
  TmEncoding e = encode(m1(), 1);
  auto x = parse_tm_input(m1(), "1");
  Cedent g0 = encode_input(e, x, 0);
  CHECK(g0.size() == 2);  // beta and the initial formula
  CHECK(g0.contains(e.beta));
  Cedent g2 = encode_input(e, x, 2);
  CHECK(g0.subset_of(g2));
  // The initial formula pins the head pair and the blank tail.
  FormulaRef d0x = encode_initial(e, x);
  CHECK(d0x == parse_formula("P_s0_1_1_0 & P_B_2_0"));
}

TEST_CASE("choices select the input word") {
  TmEncoding e = encode(parity(), 3);
  auto x = parse_tm_input(parity(), "101");
  ChoiceVector k = input_to_choices(e, x);
  SpdEnumeration en = spd_enumerate(e.delta_big);
  REQUIRE(k.size() == en.count());
  Cedent st = strengthen(e.delta_big, en, k);
  CHECK(st.harrop());
  // The strengthened cedent is satisfied by the run's assignment.
  TmComputation comp = simulate(parity(), x);
  auto assignment = computation_assignment(e, comp);
  for (FormulaRef f : st) CHECK(classical_eval(f, assignment));
  CHECK(classical_eval(e.alpha_neg, assignment));
}

TEST_CASE("cell atoms propagate exactly the computation") {
  CHECK(check_cell_atoms(m1(), parse_tm_input(m1(), "1")));
  CHECK(check_cell_atoms(m1(), parse_tm_input(m1(), "0")));
  CHECK(check_cell_atoms(parity(), parse_tm_input(parity(), "10")));
  // Spot check: the head atom is derivable at time 0, its rival is not.
  TmEncoding e = encode(m1(), 1);
  auto x = parse_tm_input(m1(), "1");
  HornClauseSet clauses = horn_clauses_of(encode_input(e, x, 0));
  auto derived = unit_closure(clauses);
  CHECK(derived.count(Formula::atom("P_s0_1_1_0")) == 1);
  CHECK(derived.count(Formula::atom("P_s0_0_1_0")) == 0);
}

TEST_CASE("halting derivation checks and decides") {
  TmArtifacts art = prepare_decision(m1(), 1);
  CHECK(art.derivation->conclusion().antecedent == art.enc.delta_big);
  CHECK(art.derivation->conclusion().succedent ==
        Formula::disj(art.enc.acc_atom, art.enc.rej_atom));
  CHECK(decide_with(art, parse_tm_input(m1(), "1")));
  CHECK_FALSE(decide_with(art, parse_tm_input(m1(), "0")));
}

TEST_CASE("decide agrees with simulate on short parity words") {
  TmArtifacts art = prepare_decision(parity(), 2);
  for (const char* s : {"00", "01", "10", "11"}) {
    auto x = parse_tm_input(parity(), s);
    bool sim = simulate(parity(), x).final_cell() == parity().accept_cell();
    CHECK(decide_with(art, x) == sim);
  }
}

TEST_CASE("the halting derivation never cites the exclusivity hypothesis") {
  TmEncoding e = encode(m1(), 1);
  DerivPtr d = build_halting_derivation(e);
  bool uses_alpha = false;
  auto walk = [&](auto&& self, const Derivation& n) -> void {
    if (n.rule() == Rule::Ax && n.conclusion().succedent == e.alpha_neg) uses_alpha = true;
    for (std::size_t i = 0; i < n.premise_count(); ++i) self(self, *n.premise(i));
  };
  walk(walk, *d);
  CHECK_FALSE(uses_alpha);
}

TEST_CASE("machine description file parses from disk format") {
  std::istringstream dummy;
  TmSpec m = parse_tm_spec("# comment line\nstates: s0 sa sr\ninput: 0 1\ntape: 0 1 B\n"
                           "start: s0\naccept: sa\nreject: sr\nbound: 2 0 0\n"
                           "* s0/1 * -> sa/B  # trailing comment\n"
                           "* s0/0 * -> sr/B\n");
  CHECK(m.step_bound(5) == 2);
  CHECK(m.step(0, m.pair_id(m.state_id("s0"), m.tape_id("1")), 1) ==
        m.pair_id(m.state_id("sa"), m.tape_id("B")));
  CHECK(m.step(0, 1, 0) == 1);  // default keeps the middle symbol
}

TEST_CASE("a moving head with writes and a turnaround simulates correctly") {
  TmSpec m = parse_tm_spec(
      "states: s0 e l sa sr\ninput: 0 1\ntape: 0 1 M B\nstart: s0\n"
      "accept: sa\nreject: sr\nbound: 3 2 0\n"
      "* s0/0 * -> M\n* s0/1 * -> M\ns0/0 * * -> e/$2\ns0/1 * * -> e/$2\n"
      "* e/0 * -> B\n* e/1 * -> B\ne/0 * * -> e/$2\ne/1 * * -> e/$2\n"
      "* e/B * -> B\n* * e/B -> l/$2\n"
      "* l/B * -> B\n* * l/B -> l/$2\n"
      "* l/M * -> sa/B\n");
  for (const char* w : {"0", "1", "01", "11"}) {
    auto x = parse_tm_input(m, w);
    TmComputation c = simulate(m, x);
    CHECK(c.final_cell() == m.accept_cell());
    CHECK(check_cell_atoms(m, x));
  }
}
