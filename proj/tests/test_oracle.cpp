#include <catch2/catch_amalgamated.hpp>

#include "njp/corpus.hpp"
#include "njp/oracle.hpp"

using namespace njp;

TEST_CASE("oracle verdict examples") {
  CHECK_FALSE(ipc_valid(parse_sequent("=> p | ~p")).valid);
  CHECK(ipc_valid(parse_sequent("p & q => q")).valid);
  CHECK(ipc_valid(parse_sequent("=> ~~(p | ~p)")).valid);
  CHECK(classical_tautology(parse_sequent("=> p | ~p")));
}

TEST_CASE("oracle on standard intuitionistic facts") {
  CHECK(ipc_valid(parse_sequent("=> p -> p")).valid);
  CHECK(ipc_valid(parse_sequent("p -> q, q -> r => p -> r")).valid);
  CHECK(ipc_valid(parse_sequent("=> ~(p & ~p)")).valid);
  CHECK_FALSE(ipc_valid(parse_sequent("=> ~~p -> p")).valid);
  CHECK_FALSE(ipc_valid(parse_sequent("=> ((p -> q) -> p) -> p")).valid);  // Peirce
  CHECK(ipc_valid(parse_sequent("=> ~~(((p -> q) -> p) -> p)")).valid);
  CHECK(ipc_valid(parse_sequent("p | q, p -> r, q -> r => r")).valid);
  CHECK_FALSE(ipc_valid(parse_sequent("(p -> q) | (q -> p) => _|_")).valid);
  CHECK_FALSE(ipc_valid(parse_sequent("=> (p -> q) | (q -> p)")).valid);
  CHECK(ipc_valid(parse_sequent("_|_ => q | r")).valid);
}

TEST_CASE("oracle cap") {
  CorpusGen gen(1);
  FormulaRef big = gen.formula(9, 3);
  while (big->size() <= 200) big = Formula::conj(big, gen.formula(9, 3));
  CHECK_THROWS_AS(ipc_valid(Sequent(Cedent{}, big)), OracleCapExceeded);
  CHECK_NOTHROW(ipc_valid(Sequent(Cedent{}, big), big->size() + 8));
}

TEST_CASE("oracle soundness against checked derivations") {
  CorpusGen gen(606);
  for (int i = 0; i < 40; ++i) {
    DerivPtr d = gen.extraction_instance(i % 2 == 0);
    REQUIRE(checks(d));
    CHECK(ipc_valid(d->conclusion()).valid);
  }
}

TEST_CASE("intuitionistic validity implies classical tautology") {
  CorpusGen gen(909);
  int valid = 0;
  for (int i = 0; i < 250; ++i) {
    Sequent s(gen.harrop_cedent(2, 2), gen.formula(3, 3, true));
    OracleVerdict v = ipc_valid(s);
    if (v.valid) {
      ++valid;
      CHECK(classical_tautology(s));
    }
  }
  CHECK(valid > 10);
}

TEST_CASE("oracle monotone in the antecedent") {
  CorpusGen gen(112);
  for (int i = 0; i < 150; ++i) {
    Sequent s(gen.harrop_cedent(2, 2), gen.formula(3, 3));
    if (!ipc_valid(s).valid) continue;
    Cedent larger = s.antecedent.union_with(gen.harrop_cedent(2, 2));
    CHECK(ipc_valid(Sequent(larger, s.succedent)).valid);
  }
}

TEST_CASE("oracle verdicts are deterministic") {
  Sequent s = parse_sequent("(p -> q) -> r, r -> s => (p -> q) -> s");
  OracleVerdict a = ipc_valid(s), b = ipc_valid(s);
  CHECK(a.valid == b.valid);
  CHECK(a.effort == b.effort);
  CHECK(a.valid);
}
