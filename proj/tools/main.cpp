#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace zlincat;

namespace {

int emit(const cli::Outcome& o) {
  std::cout << o.report.dump(2) << "\n";
  std::cerr << o.summary << "\n";
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Z-linear categories: validation, rings, modules, resolutions and K0"};
  app.require_subcommand(1);
  std::string spec;

  auto* validate = app.add_subcommand("validate", "Check the category axioms of a spec");
  validate->add_option("spec", spec, "category JSON")->required();

  std::size_t truncate = 0;
  auto* ring = app.add_subcommand("ring", "Build and certify the ring A(C)");
  ring->add_option("spec", spec, "category JSON")->required();
  ring->add_option("--truncate", truncate, "also identify the ring of the additive truncation at level N");

  cli::CheckRegularOptions reg;
  std::string morphisms_file, replay_file, cert_file;
  auto* check = app.add_subcommand("check-regular", "Search for split witnesses over pseudo-kernel chains");
  check->add_option("spec", spec, "category JSON")->required();
  check->add_option("--morphisms", morphisms_file, "morphisms JSON");
  check->add_flag("--basis", reg.basis, "test every generator of every hom-group");
  check->add_option("--depth", reg.depth, "maximum chain depth")->capture_default_str();
  check->add_option("--certificates", cert_file, "write a replayable certificate dump");
  check->add_option("--replay", replay_file, "verify a certificate dump instead of searching");

  std::size_t trials = 20;
  std::uint64_t seed = 1;
  auto* equiv = app.add_subcommand("equiv", "Randomized checks of the functor/module correspondence");
  equiv->add_option("spec", spec, "category JSON")->required();
  equiv->add_option("--trials", trials)->capture_default_str();
  equiv->add_option("--seed", seed)->capture_default_str();

  std::string witness_file, sample_file;
  auto* k0 = app.add_subcommand("k0", "K0 through a verified semisimple witness");
  k0->add_option("spec", spec, "category JSON")->required();
  k0->add_option("--witness", witness_file, "witness JSON (default: canonical witness)");
  k0->add_option("--sample", sample_file, "sample projectives JSON (default: representables)");

  std::string kind, out;
  cli::BuildOptions bo;
  auto* build = app.add_subcommand("build", "Write a category spec from a builder");
  build->add_option("kind", kind, "ring | graded | orbit | sumfields")->required();
  build->add_option("args", bo.primes, "ring name for ring, primes for sumfields");
  build->add_option("--cyclic", bo.cyclic);
  build->add_option("--nilpotent-ring", bo.nilpotent)->expected(2);
  build->add_flag("--truncate-powers", bo.truncate_powers);
  build->add_option("--group", bo.group, "perm:n:generators");
  build->add_option("--subgroups", bo.subgroups, "family, ';'-separated");
  build->add_flag("--allow-partial-family", bo.allow_partial_family);
  build->add_option("--out", out, "spec output path (default stdout)");

  std::string pk_name;
  std::size_t pk_depth = 1;
  auto* pk = app.add_subcommand("pseudo-kernel", "Dump a pseudo-n-kernel chain");
  pk->add_option("spec", spec, "category JSON")->required();
  pk->add_option("--morphisms", morphisms_file, "morphisms JSON")->required();
  pk->add_option("--name", pk_name, "morphism to use (default: first)");
  pk->add_option("--depth", pk_depth)->capture_default_str();

  auto* qi = app.add_subcommand("quasi-inverse", "Find h with f h f = f");
  qi->add_option("spec", spec, "category JSON")->required();
  qi->add_option("--morphisms", morphisms_file, "morphisms JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*validate) return emit(cli::cmd_validate(spec));
  if (*ring) return emit(cli::cmd_ring(spec, truncate));
  if (*check) {
    if (!morphisms_file.empty()) reg.morphisms = morphisms_file;
    if (!cert_file.empty()) reg.certificates = cert_file;
    if (!replay_file.empty()) reg.replay = replay_file;
    return emit(cli::cmd_check_regular(spec, reg));
  }
  if (*equiv) return emit(cli::cmd_equiv(spec, trials, seed));
  if (*k0) {
    std::optional<std::string> w, s;
    if (!witness_file.empty()) w = witness_file;
    if (!sample_file.empty()) s = sample_file;
    return emit(cli::cmd_k0(spec, w, s));
  }
  if (*build) {
    if (kind == "ring") {
      if (bo.primes.size() != 1) return emit(cli::guarded("build", [](cli::Inputs&) -> cli::Outcome {
               throw GrammarError("build ring takes exactly one ring: Z, Z/m or Z[Cm]");
             }));
      bo.ring = bo.primes[0];
    }
    cli::Outcome o = cli::cmd_build(kind, bo);
    if (o.exit_code == 0) {
      const std::string text = o.report["spec"].dump(2) + "\n";
      if (out.empty()) {
        std::cout << text;
        std::cerr << o.summary << "\n";
        return 0;
      }
      std::ofstream f(out);
      if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
      }
      f << text;
      o.report.erase("spec");
      o.report["out"] = out;
    }
    return emit(o);
  }
  if (*pk) return emit(cli::cmd_pseudo_kernel(spec, morphisms_file, pk_name.empty() ? std::nullopt : std::optional(pk_name), pk_depth));
  if (*qi) return emit(cli::cmd_quasi_inverse(spec, morphisms_file));
  return 2;
}
