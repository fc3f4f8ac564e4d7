// Acceptance suite: one criterion per function, one pass/fail line each.
// Run with the samples directory as the only argument.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "njp/corpus.hpp"
#include "njp/extract.hpp"
#include "njp/io.hpp"
#include "njp/normalize.hpp"
#include "njp/oracle.hpp"
#include "njp/slash.hpp"
#include "njp/tm.hpp"

using namespace njp;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_samples_dir;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool truth_table_satisfiable(const HornClauseSet& h) {
  std::vector<FormulaRef> atoms;
  auto add = [&](FormulaRef f) {
    if (std::find(atoms.begin(), atoms.end(), f) == atoms.end()) atoms.push_back(f);
  };
  for (const HornClause& c : h.clauses) {
    for (FormulaRef f : c.negatives) add(f);
    if (c.positive) add(c.positive);
  }
  for (std::uint64_t mask = 0; mask < (1ull << atoms.size()); ++mask) {
    auto value = [&](FormulaRef f) {
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == f) return ((mask >> i) & 1) != 0;
      return false;
    };
    bool all = true;
    for (const HornClause& c : h.clauses) {
      bool sat = c.positive && value(c.positive);
      for (FormulaRef f : c.negatives)
        if (!value(f)) sat = true;
      all = all && sat;
    }
    if (all) return true;
  }
  return false;
}

std::set<std::string> cut_closure(const std::vector<Sequent>& base) {
  std::set<std::string> seen;
  std::vector<Sequent> all;
  for (const Sequent& s : base)
    if (seen.insert(to_string(s)).second) all.push_back(s);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Sequent> next;
    for (const Sequent& a : all)
      for (const Sequent& b : all)
        if (b.antecedent.contains(a.succedent)) {
          Sequent cut(a.antecedent.union_with(b.antecedent.without(a.succedent)), b.succedent);
          if (seen.insert(to_string(cut)).second) {
            next.push_back(cut);
            grew = true;
          }
        }
    for (Sequent& s : next) all.push_back(std::move(s));
  }
  return seen;
}

bool closure_has_subsequent(const std::set<std::string>& closure, const Sequent& target) {
  std::vector<FormulaRef> ant(target.antecedent.begin(), target.antecedent.end());
  for (std::uint64_t mask = 0; mask < (1ull << ant.size()); ++mask) {
    std::vector<FormulaRef> sub;
    for (std::size_t i = 0; i < ant.size(); ++i)
      if ((mask >> i) & 1) sub.push_back(ant[i]);
    if (closure.count(to_string(Sequent(Cedent(sub.begin(), sub.end()), target.succedent))))
      return true;
  }
  return false;
}

// The shared extraction corpus: hand-written sample files plus generated
// instances, all with Harrop antecedents and disjunctive succedents.
std::vector<DerivPtr> extraction_corpus() {
  std::vector<DerivPtr> corpus;
  for (const char* name :
       {"orI0.njp", "conj_project.njp", "modus.njp", "bottom_hyp.njp", "redex_chain.njp",
        "harrop_imp.njp"}) {
    DerivPtr d = parse_derivation(slurp(g_samples_dir + "/" + name));
    corpus.push_back(d);
  }
  CorpusGen gen(0xACCE97);
  while (corpus.size() < 40) corpus.push_back(gen.extraction_instance(true));
  return corpus;
}

struct Criterion {
  const char* label;
  bool (*run)(std::string& detail);
};

// 1. Horn engine: truth-table agreement, per-instance latency, and the
// empirical runtime exponent.
bool criterion_horn(std::string& detail) {
  CorpusGen gen(11);
  int agree = 0, total = 0;
  double worst = 0;
  for (int i = 0; i < 520; ++i) {
    HornClauseSet h = gen.horn_set(4 + static_cast<int>(gen.rng()() % 9),
                                   1 + static_cast<int>(gen.rng()() % 30));
    Clock::time_point t0 = Clock::now();
    HornResult r = horn_satisfiability(h);
    worst = std::max(worst, seconds_since(t0));
    ++total;
    if (r.satisfiable == truth_table_satisfiable(h)) ++agree;
  }
  if (agree != total) {
    detail = "agreement " + std::to_string(agree) + "/" + std::to_string(total);
    return false;
  }
  if (worst >= 0.010) {
    detail = "slowest instance " + std::to_string(worst * 1000) + " ms";
    return false;
  }
  // Runtime growth: chains of implications of increasing length, refuted
  // from a single seed unit; size doubles per point.
  std::vector<double> sizes, times;
  for (int k = 1; k <= 6; ++k) {
    int n = 1000 << k;
    HornClauseSet h;
    h.clauses.push_back(HornClause{{}, Formula::atom("c0")});
    for (int i = 0; i < n; ++i)
      h.clauses.push_back(HornClause{Cedent{Formula::atom("c" + std::to_string(i))},
                                     Formula::atom("c" + std::to_string(i + 1))});
    h.clauses.push_back(
        HornClause{Cedent{Formula::atom("c" + std::to_string(n))}, nullptr});
    Clock::time_point t0 = Clock::now();
    HornResult r = horn_satisfiability(h);
    double dt = seconds_since(t0);
    if (r.satisfiable) {
      detail = "chain instance not refuted";
      return false;
    }
    sizes.push_back(static_cast<double>(n));
    times.push_back(std::max(dt, 1e-6));
  }
  double slope = loglog_slope(sizes, times);
  detail = "agreement " + std::to_string(agree) + "/" + std::to_string(total) +
           ", max " + std::to_string(worst * 1000).substr(0, 5) + " ms, exponent " +
           std::to_string(slope).substr(0, 4);
  return slope <= 2.3;
}

// 2. Immediate-derivability certificates round-trip and match the
// brute-force cut closure on small instances.
bool criterion_idcheck(std::string& detail) {
  CorpusGen gen(22);
  int yes = 0, total = 0, mismatches = 0, invalid = 0;
  for (int i = 0; i < 250; ++i) {
    std::vector<FormulaRef> pool;
    for (int a = 0; a < 4; ++a) pool.push_back(gen.atom(4));
    std::vector<Sequent> base;
    int nbase = 1 + static_cast<int>(gen.rng()() % 8);
    for (int b = 0; b < nbase; ++b) {
      std::vector<FormulaRef> ant;
      for (FormulaRef f : pool)
        if (gen.rng()() % 3 == 0) ant.push_back(f);
      base.push_back(Sequent(Cedent(ant.begin(), ant.end()), pool[gen.rng()() % pool.size()]));
    }
    std::vector<FormulaRef> tant;
    for (FormulaRef f : pool)
      if (gen.rng()() % 2 == 0) tant.push_back(f);
    Sequent target(Cedent(tant.begin(), tant.end()), pool[gen.rng()() % pool.size()]);
    ++total;
    auto cd = id_check(base, target);
    bool oracle = closure_has_subsequent(cut_closure(base), target);
    if (cd.has_value() != oracle) ++mismatches;
    if (cd) {
      ++yes;
      if (!validate_cut_deduction(*cd, base, target)) ++invalid;
    }
  }
  detail = std::to_string(total) + " instances, " + std::to_string(yes) +
           " certificates, mismatches " + std::to_string(mismatches) + ", invalid " +
           std::to_string(invalid);
  return mismatches == 0 && invalid == 0 && yes >= 50;
}

// 3. Direct extraction over the corpus: valid index, validating
// certificate, no boundedness failure, within the time budget.
bool criterion_extract_direct(std::string& detail) {
  Clock::time_point t0 = Clock::now();
  std::vector<DerivPtr> corpus = extraction_corpus();
  int ok = 0;
  for (const DerivPtr& d : corpus) {
    if (!checks(d)) {
      detail = "corpus derivation does not check";
      return false;
    }
    ExtractionResult r;
    try {
      r = extract_direct(d);
    } catch (const BoundednessViolation&) {
      detail = "boundedness violation on " + to_string(d->conclusion());
      return false;
    }
    if (!validate_extraction(r)) {
      detail = "certificate failed on " + to_string(d->conclusion());
      return false;
    }
    if (!ipc_valid(r.extracted()).valid) {
      detail = "extracted sequent not valid: " + to_string(r.extracted());
      return false;
    }
    ++ok;
  }
  double dt = seconds_since(t0);
  detail = std::to_string(ok) + " derivations in " + std::to_string(dt).substr(0, 5) + " s";
  return dt < 60.0;
}

// 4. Slash extraction succeeds with validating certificates wherever the
// direct route does.
bool criterion_extract_slash(std::string& detail) {
  std::vector<DerivPtr> corpus = extraction_corpus();
  int ok = 0;
  for (const DerivPtr& d : corpus) {
    bool direct_ok = true;
    try {
      (void)extract_direct(d);
    } catch (const BoundednessViolation&) {
      direct_ok = false;
    }
    ExtractionResult r;
    try {
      r = extract_slash(d);
    } catch (const BoundednessViolation&) {
      detail = "slash extraction failed where the direct route " +
               std::string(direct_ok ? "succeeded" : "also failed");
      return false;
    }
    if (!validate_extraction(r)) {
      detail = "slash certificate failed on " + to_string(d->conclusion());
      return false;
    }
    if (!ipc_valid(r.extracted()).valid) {
      detail = "slash-extracted sequent not valid";
      return false;
    }
    ++ok;
  }
  detail = std::to_string(ok) + " derivations";
  return true;
}

// 5. Normalization: terminates within quadratic fuel, removes every redex,
// keeps sequents immediately derivable, ends in an introduction when the
// preconditions hold.
bool criterion_normalize(std::string& detail) {
  std::vector<DerivPtr> corpus = extraction_corpus();
  int intro_checked = 0;
  std::size_t max_steps = 0;
  for (const DerivPtr& d : corpus) {
    std::size_t fuel = 10 * d->node_count() * d->node_count();
    NormalizeResult r = harrop_normalize(d, fuel);
    if (r.fuel_exhausted) {
      detail = "fuel exhausted on " + to_string(d->conclusion());
      return false;
    }
    max_steps = std::max(max_steps, r.steps);
    if (find_harrop_maximal(r.derivation).has_value()) {
      detail = "redex left after normalization";
      return false;
    }
    if (!checks(r.derivation) || !(r.derivation->conclusion() == d->conclusion())) {
      detail = "normal form broken";
      return false;
    }
    std::vector<Sequent> original = sequents_of(d);
    for (const Sequent& s : sequents_of(r.derivation))
      if (!id_check(original, s).has_value()) {
        detail = "sequent not immediately derivable: " + to_string(s);
        return false;
      }
    const Sequent& c = r.derivation->conclusion();
    if (c.antecedent.harrop() && !c.antecedent.contains(Formula::bottom()) &&
        !c.succedent->harrop()) {
      ++intro_checked;
      if (!check_intro_ending(r.derivation)) {
        detail = "normal derivation does not end with an introduction";
        return false;
      }
    }
  }
  detail = std::to_string(corpus.size()) + " derivations, max steps " +
           std::to_string(max_steps) + ", intro-ending checked on " +
           std::to_string(intro_checked);
  return intro_checked >= 10;
}

// 6. Slash soundness and Harrop completeness with zero counterexamples.
bool criterion_slash(std::string& detail) {
  std::vector<DerivPtr> corpus = extraction_corpus();
  int sound_checks = 0;
  for (const DerivPtr& d : corpus) {
    const Cedent& g0 = d->conclusion().antecedent;
    for (const std::vector<Sequent>& base : {sequents_of(d), build_analysis_base(d)}) {
      for (const Sequent& s : sequents_of(d)) {
        if (!slash_eval(base, g0, s.antecedent)) continue;
        ++sound_checks;
        if (!slash_eval(base, g0, s.succedent)) {
          detail = "soundness counterexample at " + to_string(s);
          return false;
        }
      }
    }
  }
  CorpusGen gen(66);
  int complete_checks = 0;
  for (int i = 0; i < 400 && complete_checks < 100; ++i) {
    FormulaRef a0 = gen.harrop_formula(3);
    Cedent g0 = gen.harrop_cedent(2, 1);
    std::vector<Sequent> base;
    for (const Sequent& s : analysis_set(a0)) base.push_back(s);
    for (int b = 0; b < 2; ++b)
      base.push_back(Sequent(gen.harrop_cedent(1, 1), gen.formula(1)));
    if (gen.rng()() % 2 == 0) base.push_back(Sequent(g0, a0));
    if (!id_check(base, Sequent(g0, a0)).has_value()) continue;
    ++complete_checks;
    if (!slash_eval(base, g0, a0)) {
      detail = "completeness counterexample at " + to_string(Sequent(g0, a0));
      return false;
    }
  }
  detail = std::to_string(sound_checks) + " soundness and " +
           std::to_string(complete_checks) + " completeness checks";
  return complete_checks >= 100;
}

// 7. Generalized extraction under every choice vector.
bool criterion_choice(std::string& detail) {
  CorpusGen gen(77);
  int instances = 0, extractions = 0, with_choices = 0;
  while (instances < 30) {
    DerivPtr d = gen.extraction_instance(false);
    const Cedent& g = d->conclusion().antecedent;
    SpdEnumeration e = spd_enumerate(g);
    if (e.count() > 3) continue;
    // Keep the corpus split between strengthenable and already-Harrop
    // antecedents.
    if (instances % 2 == 0 && e.count() == 0) continue;
    if (e.count() > 0) ++with_choices;
    ++instances;
    for (unsigned long long k = 0; k < (1ull << e.count()); ++k) {
      ChoiceVector cv = ChoiceVector::from_number(k, e.count());
      if (!strengthen(g, e, cv).harrop()) {
        detail = "strengthened cedent not Harrop";
        return false;
      }
      DerivPtr dk = apply_choices(d, e, cv);
      if (!checks(dk)) {
        detail = "choice-rewritten derivation does not check";
        return false;
      }
      ExtractionResult r = extract_choice(d, cv);
      if (!validate_extraction(r)) {
        detail = "choice certificate failed";
        return false;
      }
      Sequent ex = r.extracted();
      std::size_t total = ex.succedent->size();
      for (FormulaRef f : ex.antecedent) total += f->size();
      if (total <= 200 && !ipc_valid(ex).valid) {
        detail = "choice-extracted sequent not valid: " + to_string(ex);
        return false;
      }
      ++extractions;
    }
  }
  detail = std::to_string(instances) + " instances (" + std::to_string(with_choices) +
           " with choices), " + std::to_string(extractions) + " extractions";
  return with_choices >= 15;
}

// 8. Machine pipeline end to end on both sample machines.
bool criterion_machines(std::string& detail) {
  Clock::time_point t0 = Clock::now();
  TmSpec machines[2] = {parse_tm_spec(slurp(g_samples_dir + "/m1.tm")),
                        parse_tm_spec(slurp(g_samples_dir + "/parity.tm"))};
  for (const TmSpec& m : machines) {
    // Derivability of cell atoms, decision agreement, and the classical
    // side condition, for every input of length at most 4.
    for (int n = 1; n <= 4; ++n) {
      TmArtifacts art = prepare_decision(m, n);
      SpdEnumeration en = spd_enumerate(art.enc.delta_big);
      for (std::uint64_t word = 0; word < (1ull << n); ++word) {
        std::vector<int> x;
        for (int j = 0; j < n; ++j)
          x.push_back(m.tape_id(m.input_symbols[(word >> j) & 1]));
        if (!check_cell_atoms(m, x)) {
          detail = "cell-atom propagation mismatch";
          return false;
        }
        TmComputation comp = simulate(m, x);
        bool sim_accepts = comp.final_cell() == m.accept_cell();
        if (decide_with(art, x) != sim_accepts) {
          detail = "decision disagrees with the simulator";
          return false;
        }
        // Classical satisfiability of the strengthened hypotheses plus the
        // exclusivity formula, witnessed by the run's own assignment.
        auto assignment = computation_assignment(art.enc, comp);
        Cedent st = strengthen(art.enc.delta_big, en, input_to_choices(art.enc, x));
        for (FormulaRef f : st.with(art.enc.alpha_neg))
          if (!classical_eval(f, assignment)) {
            detail = "side condition violated at word " + std::to_string(word);
            return false;
          }
      }
    }
    // Polynomial growth of the encoding and the derivation.
    std::vector<double> ns, enc_sizes, node_counts;
    for (int n = 1; n <= 6; ++n) {
      TmEncoding e = encode(m, n);
      DerivPtr d = build_halting_derivation(e);
      if (check_derivation(d).has_value()) {
        detail = "halting derivation fails to check at n=" + std::to_string(n);
        return false;
      }
      ns.push_back(n);
      enc_sizes.push_back(static_cast<double>(e.total_size()));
      node_counts.push_back(static_cast<double>(d->node_count()));
    }
    double enc_slope = loglog_slope(ns, enc_sizes);
    double node_slope = loglog_slope(ns, node_counts);
    if (enc_slope > 3.0 || node_slope > 3.0) {
      detail = "growth exponents " + std::to_string(enc_slope) + ", " +
               std::to_string(node_slope);
      return false;
    }
  }
  double dt = seconds_since(t0);
  detail = "both machines, all words of length <= 4, growth to n=6, " +
           std::to_string(dt).substr(0, 5) + " s";
  return dt < 300.0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: njp_acceptance <samples-dir>\n";
    return 2;
  }
  g_samples_dir = argv[1];

  Criterion criteria[] = {
      {"1 horn engine agreement and quadratic bound", &criterion_horn},
      {"2 immediate-derivability certificates and closure oracle", &criterion_idcheck},
      {"3 direct extraction over the corpus", &criterion_extract_direct},
      {"4 slash extraction over the corpus", &criterion_extract_slash},
      {"5 normalization and introduction endings", &criterion_normalize},
      {"6 slash soundness and Harrop completeness", &criterion_slash},
      {"7 generalized extraction under all choices", &criterion_choice},
      {"8 machine pipeline end to end", &criterion_machines},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s%s%s\n", ok ? "PASS" : "FAIL", c.label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
