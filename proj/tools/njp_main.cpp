// Command-line front end: proof checking, witness extraction,
// normalization, the slash judgment, Horn solving, immediate derivability,
// the machine pipeline, the validity oracle, and the randomized corpus
// runner.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "njp/corpus.hpp"
#include "njp/extract.hpp"
#include "njp/io.hpp"
#include "njp/normalize.hpp"
#include "njp/oracle.hpp"
#include "njp/slash.hpp"
#include "njp/tm.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitBoundedness = 3;
constexpr int kExitFuel = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw njp::Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path + ".tmp", std::ios::binary);
  if (!out) throw njp::Error("cannot write " + path);
  out << text;
  out.close();
  if (std::rename((path + ".tmp").c_str(), path.c_str()) != 0)
    throw njp::Error("cannot move " + path + ".tmp into place");
}

std::size_t default_fuel() {
  if (const char* env = std::getenv("NJP_FUEL")) return std::stoull(env);
  return 100000;
}

struct Options {
  std::uint64_t seed = 1;
  std::size_t fuel = default_fuel();
  std::size_t oracle_cap = 200;
};

int run_check(const std::string& file) {
  njp::DerivPtr d = njp::parse_derivation(slurp(file));
  if (auto err = njp::check_derivation(d)) {
    std::cerr << "error: " << to_string(*err) << "\n";
    return kExitPrecondition;
  }
  std::cout << "ok " << d->node_count() << " nodes, conclusion: "
            << to_string(d->conclusion()) << "\n";
  return 0;
}

int run_extract(const std::string& method, const std::string& choices, const std::string& file,
                std::string cert_out) {
  njp::DerivPtr d = njp::parse_derivation(slurp(file));
  njp::ExtractionResult res;
  if (!choices.empty()) {
    if (method != "bm") {
      std::cerr << "error: --choices requires --method bm\n";
      return kExitUsage;
    }
    res = njp::extract_choice(d, njp::ChoiceVector::from_bitstring(choices));
  } else if (method == "bm") {
    res = njp::extract_direct(d);
  } else if (method == "slash") {
    res = njp::extract_slash(d);
  } else {
    std::cerr << "error: unknown method '" << method << "'\n";
    return kExitUsage;
  }
  if (cert_out.empty()) cert_out = file + ".cert";
  if (const njp::CutPtr* cd = res.cut_certificate()) {
    spit(cert_out, to_string(*cd) + "\n");
  } else {
    spit(cert_out, to_string(*res.derivation_certificate()) + "\n");
  }
  std::cout << res.index << "\n" << cert_out << "\n";
  return 0;
}

int run_normalize(const std::string& file, std::size_t fuel, const std::string& out) {
  njp::DerivPtr d = njp::parse_derivation(slurp(file));
  if (auto err = njp::check_derivation(d)) {
    std::cerr << "error: input does not check: " << to_string(*err) << "\n";
    return kExitPrecondition;
  }
  njp::NormalizeResult res = njp::harrop_normalize(d, fuel);
  std::cerr << "steps: " << res.steps << "\n";
  if (res.fuel_exhausted) {
    std::cerr << "fuel exhausted after " << res.steps << " steps\n";
    if (!out.empty()) spit(out, to_string(res.derivation) + "\n");
    return kExitFuel;
  }
  if (!out.empty()) {
    spit(out, to_string(res.derivation) + "\n");
    std::cout << out << "\n";
  } else {
    std::cout << to_string(res.derivation) << "\n";
  }
  return 0;
}

int run_slash(const std::string& base_file, const std::string& sequent_text) {
  std::vector<njp::Sequent> base = njp::parse_sequent_file(slurp(base_file));
  njp::Sequent s = njp::parse_sequent(sequent_text);
  std::vector<njp::SlashTraceEntry> trace;
  bool holds = njp::slash_eval_trace(base, s.antecedent, s.succedent, trace);
  for (const auto& e : trace)
    std::cout << (e.holds ? "  + " : "  - ") << to_string(e.formula) << "\n";
  std::cout << (holds ? "holds" : "fails") << "\n";
  return holds ? 0 : kExitPrecondition;
}

int run_horn(const std::string& file) {
  njp::HornClauseSet h = njp::parse_clause_file(slurp(file));
  njp::HornResult res = njp::horn_satisfiability(h);
  if (res.satisfiable) {
    std::cout << "SATISFIABLE\n";
    return 0;
  }
  std::cout << "refuted\n";
  for (const auto& step : res.steps)
    std::cout << step.snapshot << ": " << to_string(step.unit) << "\n";
  return 0;
}

int run_idcheck(const std::string& base_file, const std::string& target_text,
                std::string cert_out) {
  std::vector<njp::Sequent> base = njp::parse_sequent_file(slurp(base_file));
  njp::Sequent target = njp::parse_sequent(target_text);
  auto cd = njp::id_check(base, target);
  if (!cd) {
    std::cout << "NO\n";
    return kExitPrecondition;
  }
  std::cout << to_string((*cd)->conclusion()) << "\n";
  if (!cert_out.empty()) {
    spit(cert_out, to_string(*cd) + "\n");
    std::cout << cert_out << "\n";
  }
  return 0;
}

int run_spd(const std::string& cedent_text) {
  njp::Cedent g = njp::parse_cedent(cedent_text);
  njp::SpdEnumeration e = njp::spd_enumerate(g);
  std::cout << "n = " << e.count() << "\n";
  for (std::size_t j = 0; j < e.count(); ++j)
    std::cout << j << ": " << to_string(e.occurrences[j].path) << " "
              << to_string(e.occurrences[j].disjunction) << "\n";
  return 0;
}

int run_oracle(const std::string& sequent_text, std::size_t cap) {
  njp::OracleVerdict v = njp::ipc_valid(njp::parse_sequent(sequent_text), cap);
  std::cout << (v.valid ? "valid" : "invalid") << "\n";
  return v.valid ? 0 : 1;
}

int run_tm(const std::string& sub, const std::string& machine_file, const std::string& input,
           long long n, const std::string& out, bool trace) {
  njp::TmSpec m = njp::parse_tm_spec(slurp(machine_file));
  if (sub == "simulate") {
    auto x = njp::parse_tm_input(m, input);
    njp::TmComputation comp = njp::simulate(m, x);
    if (trace) std::cout << to_string(m, comp);
    bool acc = comp.final_cell() == m.accept_cell();
    std::cout << (acc ? "accept" : "reject") << "\n";
    return 0;
  }
  if (sub == "encode") {
    long long len = n > 0 ? n : static_cast<long long>(input.size());
    if (len < 1) {
      std::cerr << "error: provide -n or --input\n";
      return kExitUsage;
    }
    njp::TmEncoding e = njp::encode(m, len);
    std::cout << "n " << e.n << "\nsteps " << e.ell << "\nformulas " << e.delta_big.size()
              << "\ntotal_size " << e.total_size() << "\n";
    if (!out.empty()) {
      std::string text;
      for (njp::FormulaRef f : e.delta_big) text += to_string(f) + "\n";
      spit(out, text);
      std::cout << out << "\n";
    }
    return 0;
  }
  if (sub == "derive") {
    long long len = n > 0 ? n : static_cast<long long>(input.size());
    if (len < 1) {
      std::cerr << "error: provide -n or --input\n";
      return kExitUsage;
    }
    njp::TmEncoding e = njp::encode(m, len);
    njp::DerivPtr d = njp::build_halting_derivation(e);
    auto err = njp::check_derivation(d);
    std::cout << "nodes " << d->node_count() << "\ncheck " << (err ? "FAIL" : "ok") << "\n";
    if (!out.empty()) {
      std::ofstream os(out, std::ios::binary);
      njp::print_derivation(os, d);
      os << "\n";
      std::cout << out << "\n";
    }
    return err ? kExitPrecondition : 0;
  }
  if (sub == "decide") {
    auto x = njp::parse_tm_input(m, input);
    bool acc = njp::decide(m, x);
    std::cout << (acc ? "accept" : "reject") << "\n";
    return 0;
  }
  if (sub == "check-jl7") {
    auto x = njp::parse_tm_input(m, input);
    bool ok = njp::check_cell_atoms(m, x);
    std::cout << (ok ? "ok" : "FAIL") << "\n";
    return ok ? 0 : kExitPrecondition;
  }
  std::cerr << "error: unknown tm subcommand '" << sub << "'\n";
  return kExitUsage;
}

// Randomized property batch shared with the acceptance suite at desk scale.
int run_corpus(std::uint64_t seed, int count, const std::string& out_dir) {
  njp::CorpusGen gen(seed);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "pass " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  bool extract_ok = true, slash_ok = true, normalize_ok = true, oracle_ok = true;
  for (int i = 0; i < count; ++i) {
    njp::DerivPtr d = gen.extraction_instance(true);
    if (!njp::checks(d)) { extract_ok = false; continue; }
    njp::ExtractionResult direct = njp::extract_direct(d);
    extract_ok = extract_ok && njp::validate_extraction(direct);
    njp::ExtractionResult slashed = njp::extract_slash(d);
    slash_ok = slash_ok && njp::validate_extraction(slashed);
    oracle_ok = oracle_ok && njp::ipc_valid(direct.extracted()).valid;
    njp::NormalizeResult nr =
        njp::harrop_normalize(d, 10 * d->node_count() * d->node_count());
    normalize_ok = normalize_ok && !nr.fuel_exhausted &&
                   !njp::find_harrop_maximal(nr.derivation).has_value() &&
                   njp::checks(nr.derivation);
    if (!out_dir.empty()) {
      spit(out_dir + "/instance_" + std::to_string(i) + ".njp", to_string(d) + "\n");
    }
  }
  report("extraction certificates validate", extract_ok);
  report("slash extraction validates", slash_ok);
  report("normalization reaches normal form", normalize_ok);
  report("extracted sequents oracle-valid", oracle_ok);
  return failures == 0 ? 0 : kExitPrecondition;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"natural deduction toolkit for intuitionistic propositional logic"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--fuel", opt.fuel, "normalization fuel (default NJP_FUEL or 100000)");
  app.add_option("--oracle-cap", opt.oracle_cap, "oracle size cap");

  std::string file, method = "bm", choices, cert_out, out, base_file, text, machine, input;
  long long n = 0;
  bool trace = false;

  auto* check = app.add_subcommand("check", "check a derivation file");
  check->add_option("file", file)->required();

  auto* extract = app.add_subcommand("extract", "extract a disjunct with certificate");
  extract->add_option("--method", method, "bm|slash")->required();
  extract->add_option("--choices", choices, "choice bitstring (bit 0 first)");
  extract->add_option("--cert-out", cert_out, "certificate output path");
  extract->add_option("file", file)->required();

  auto* normalize = app.add_subcommand("normalize", "Harrop-normalize a derivation");
  normalize->add_option("--out", out, "output path (default stdout)");
  normalize->add_option("file", file)->required();

  auto* slash = app.add_subcommand("slash", "evaluate the slash judgment");
  slash->add_option("base", base_file, "sequent-set file")->required();
  slash->add_option("sequent", text, "context => formula")->required();

  auto* horn = app.add_subcommand("horn", "Horn satisfiability of a clause file");
  horn->add_option("file", file)->required();

  auto* idcheck = app.add_subcommand("idcheck", "immediate derivability of a subsequent");
  idcheck->add_option("base", base_file, "sequent-set file")->required();
  idcheck->add_option("target", text, "target sequent")->required();
  idcheck->add_option("--cert-out", cert_out, "certificate output path");

  auto* spd = app.add_subcommand("spd", "enumerate strictly positive disjunctions");
  spd->add_option("cedent", text, "comma-separated cedent")->required();

  auto* tm = app.add_subcommand("tm", "machine encoding pipeline");
  tm->add_option("sub", method, "simulate|encode|derive|decide|check-jl7")->required();
  tm->add_option("--machine", machine, "machine description file")->required();
  tm->add_option("--input", input, "input word");
  tm->add_option("-n", n, "input length (encode/derive)");
  tm->add_option("--out", out, "output path");
  tm->add_flag("--trace", trace, "print the computation");

  auto* oracle = app.add_subcommand("oracle", "intuitionistic validity verdict");
  oracle->add_option("sequent", text, "sequent text")->required();

  auto* corpus = app.add_subcommand("corpus", "randomized corpus runner");
  corpus->add_option("sub", method, "run")->required();
  corpus->add_option("--count", n, "number of instances (default 30)");
  corpus->add_option("--out", out, "directory for generated instances");

  // Global flags remain usable after the subcommand name.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(file);
    if (extract->parsed()) return run_extract(method, choices, file, cert_out);
    if (normalize->parsed()) return run_normalize(file, opt.fuel, out);
    if (slash->parsed()) return run_slash(base_file, text);
    if (horn->parsed()) return run_horn(file);
    if (idcheck->parsed()) return run_idcheck(base_file, text, cert_out);
    if (spd->parsed()) return run_spd(text);
    if (tm->parsed()) return run_tm(method, machine, input, n, out, trace);
    if (oracle->parsed()) return run_oracle(text, opt.oracle_cap);
    if (corpus->parsed()) {
      if (method != "run") {
        std::cerr << "error: unknown corpus subcommand '" << method << "'\n";
        return kExitUsage;
      }
      return run_corpus(opt.seed, n > 0 ? static_cast<int>(n) : 30, out);
    }
  } catch (const njp::BoundednessViolation& e) {
    std::cerr << "boundedness violation: " << e.what() << "\n";
    return kExitBoundedness;
  } catch (const njp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const njp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitUsage;
}
