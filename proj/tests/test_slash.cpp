#include <catch2/catch_amalgamated.hpp>

#include "njp/corpus.hpp"
#include "njp/slash.hpp"

using namespace njp;

TEST_CASE("slash evaluation examples") {
  {
    std::vector<Sequent> base{parse_sequent("=> p")};
    CHECK(slash_eval(base, Cedent{}, Formula::atom("p")));
    // The disjunction is a distinct atom in the encoding, so the
    // prerequisite fails.
    CHECK_FALSE(slash_eval(base, Cedent{}, parse_formula("p | q")));
  }
  {
    std::vector<Sequent> base{parse_sequent("=> p -> q")};
    CHECK(slash_eval(base, Cedent{}, parse_formula("p -> q")));
  }
  {
    // Cedent form: conjunction over members.
    std::vector<Sequent> base{parse_sequent("=> p"), parse_sequent("=> q")};
    CHECK(slash_eval(base, Cedent{}, parse_cedent("p, q")));
    CHECK_FALSE(slash_eval(base, Cedent{}, parse_cedent("p, r")));
  }
}

TEST_CASE("slash implies immediate derivability") {
  CorpusGen gen(21);
  for (int i = 0; i < 150; ++i) {
    std::vector<Sequent> base;
    for (int b = 0; b < 3; ++b)
      base.push_back(Sequent(gen.harrop_cedent(1, 1), gen.formula(2)));
    Cedent ctx = gen.harrop_cedent(1, 1);
    FormulaRef f = gen.formula(2);
    if (slash_eval(base, ctx, f))
      CHECK(id_check(base, Sequent(ctx, f)).has_value());
  }
}

TEST_CASE("analysis base contents") {
  {
    DerivPtr d = parse_derivation("(ax \"p => p\")");
    std::vector<Sequent> base = build_analysis_base(d);
    REQUIRE(base.size() == 1);
    CHECK(base[0] == parse_sequent("p => p"));
  }
  {
    DerivPtr d = parse_derivation(
        "(andE0 \"p & q => p\" (ax \"p & q => p & q\"))");
    std::vector<Sequent> base = build_analysis_base(d);
    auto has = [&](const char* s) {
      Sequent want = parse_sequent(s);
      for (const Sequent& b : base)
        if (b == want) return true;
      return false;
    };
    CHECK(has("p & q => p"));
    CHECK(has("p & q => q"));       // analysis sequents of the hypothesis
    CHECK(has("p & q => p & q"));   // reflexive sequent
  }
  {
    DerivPtr d = parse_derivation(
        "(impE \"p, p -> q => q\" (ax \"p, p -> q => p -> q\") (ax \"p, p -> q => p\"))");
    std::vector<Sequent> base = build_analysis_base(d);
    bool found = false;
    for (const Sequent& b : base)
      if (b == parse_sequent("p, p -> q => q")) found = true;
    CHECK(found);
  }
}

TEST_CASE("slash soundness along corpus derivations") {
  CorpusGen gen(3333);
  for (int i = 0; i < 25; ++i) {
    DerivPtr d = gen.extraction_instance(true);
    const Cedent& g0 = d->conclusion().antecedent;
    for (const std::vector<Sequent>& base :
         {sequents_of(d), build_analysis_base(d)}) {
      for (const Sequent& s : sequents_of(d)) {
        if (!slash_eval(base, g0, s.antecedent)) continue;
        CHECK(slash_eval(base, g0, s.succedent));
      }
    }
  }
}

TEST_CASE("harrop completeness of the slash") {
  CorpusGen gen(4444);
  int nonvacuous = 0;
  for (int i = 0; i < 150; ++i) {
    FormulaRef a0 = gen.harrop_formula(3);
    Cedent g0 = gen.harrop_cedent(2, 1);
    std::vector<Sequent> base;
    for (const Sequent& s : analysis_set(a0)) base.push_back(s);
    for (int b = 0; b < 2; ++b)
      base.push_back(Sequent(gen.harrop_cedent(1, 1), gen.formula(1)));
    if (gen.rng()() % 2 == 0) base.push_back(Sequent(g0, a0));
    if (!id_check(base, Sequent(g0, a0)).has_value()) continue;
    ++nonvacuous;
    CHECK(slash_eval(base, g0, a0));
  }
  CHECK(nonvacuous >= 30);
}
