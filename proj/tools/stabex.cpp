#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>

#include "stabex/report.hpp"

namespace {

// Registers the options shared by every subcommand on `sub`, binding them
// into `cfg`. Presence flags distinguish "not given" from a default value.
struct OptionSet {
  int oracle_bound = 0;
  int sample = 0;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* oracle_opt = nullptr;
  CLI::Option* sample_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, stabex::RunConfig& cfg, OptionSet& opts) {
  sub->add_option("--instance", cfg.instance, "instance descriptor (zmod:<n> or pairs:<p>)")
      ->required();
  sub->add_option("--bound", cfg.bound, "enumeration bound (rank / dimension cap)");
  opts.oracle_opt =
      sub->add_option("--oracle-bound", opts.oracle_bound, "independent verification bound");
  sub->add_option("--class", cfg.cls, "conflation class: split, stable, all-kcp or empty");
  sub->add_option("--degrees", cfg.degrees, "number of chain degrees (chain command)");
  sub->add_option("--length", cfg.length, "spectrum length (spectra command)");
  opts.sample_opt = sub->add_option("--sample", opts.sample, "certify only k sampled subjects");
  opts.seed_opt = sub->add_option("--seed", opts.seed, "sampling seed (required with --sample)");
  sub->add_option("--out", opts.out, "also write the JSON report to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabex: stability and exact-structure checks on additive categories"};
  app.require_subcommand(1);

  stabex::RunConfig cfg;
  std::map<std::string, OptionSet> opt_sets;
  for (const char* name : {"axioms", "classify", "karoubi", "chain", "spectra"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, cfg, opt_sets[name]);
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; any parse failure is a usage error
  }

  const OptionSet& opts = opt_sets.at(cfg.command);
  if (opts.oracle_opt->count()) cfg.oracle_bound = opts.oracle_bound;
  if (opts.sample_opt->count()) cfg.sample = opts.sample;
  if (opts.seed_opt->count()) cfg.seed = opts.seed;

  try {
    auto start = std::chrono::steady_clock::now();
    stabex::RunResult res = stabex::run_command(cfg);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::string text = res.report.dump(2) + "\n";
    std::cout << text;
    if (!opts.out.empty()) {
      std::ofstream f(opts.out, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write " << opts.out << "\n";
        return 2;
      }
      f << text;
    }
    std::cerr << res.summary << " (" << ms << " ms)\n";
    return res.pass ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
