#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/scenario.hpp"

namespace {

decaylab::Scenario resolve(const std::string& name_or_path) {
  if (auto s = decaylab::builtin_scenario(name_or_path)) return *s;
  return decaylab::load_scenario(name_or_path);
}

int report_error(const std::string& context, const std::exception& e) {
  using namespace decaylab;
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
    std::cerr << "config error";
    if (c->line() > 0) std::cerr << " at line " << c->line();
    if (!c->field().empty()) std::cerr << " (" << c->field() << ")";
    std::cerr << ": " << c->what() << '\n';
    return 2;
  }
  if (dynamic_cast<const IoError*>(&e)) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  }
  std::cerr << "numerical failure in " << context << ": " << e.what() << '\n';
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-exponential decay laboratory"};
  app.require_subcommand(1);

  std::string target, out_dir = ".";
  unsigned threads = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a builtin scenario or a config file");
  run->add_option("scenario", target, "Builtin name or config path")->required();
  run->add_option("--threads", threads, "Worker threads (default: DECAYLAB_THREADS or 1)");
  run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Monte Carlo seed override");

  auto* scat = app.add_subcommand("scattering", "Scattering table, scattering length and poles");
  scat->add_option("config", target, "Builtin name or config path")->required();

  app.add_subcommand("list-scenarios", "List builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (app.got_subcommand("list-scenarios")) {
    for (const auto& n : decaylab::builtin_scenario_names()) std::cout << n << '\n';
    return 0;
  }

  std::string stage = "configuration";
  try {
    decaylab::Scenario s = resolve(target);
    if (app.got_subcommand("scattering")) {
      stage = "scattering report";
      std::cout << decaylab::format_scattering_report(decaylab::run_scattering_report(s));
      return 0;
    }
    if (*seed_opt) s.mc_seed = seed;
    if (threads == 0) threads = decaylab::default_thread_count();
    stage = "run_scenario(" + s.name + ")";
    const auto result = decaylab::run_scenario(s, threads);
    stage = "emit_outputs";
    const auto files = decaylab::emit_outputs(result, out_dir);
    std::cout << decaylab::format_report(result);
    std::cout << "wrote " << files.csv.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_error(stage, e);
  }
}
