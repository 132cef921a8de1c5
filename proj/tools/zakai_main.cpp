#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "experiment/commands.hpp"
#include "experiment/config.hpp"
#include "zakai/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Flags {
  std::string config;
  std::string table;
  std::string obs;
  std::string out;
  std::optional<std::uint64_t> seed_override;
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "experiment configuration file")->required();
  sub->add_option("--out", flags.out, "output file or directory (default: run.out)");
  sub->add_option("--seed-override", flags.seed_override, "replace run.seed");
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  namespace ex = zakai::experiment;

  CLI::App app{"Separation-of-variables nonlinear filter: tables, simulation, filtering and sweeps"};
  app.require_subcommand(1);
  Flags flags;

  auto* precompute = app.add_subcommand("precompute", "assemble the Galerkin system and write a propagator table");
  add_common(precompute, flags);
  auto* simulate = app.add_subcommand("simulate", "simulate signal and observation paths");
  add_common(simulate, flags);
  auto* filter = app.add_subcommand("filter", "run the online recursion over an observation file");
  add_common(filter, flags);
  filter->add_option("--table", flags.table, "propagator table file")->required();
  filter->add_option("--obs", flags.obs, "observation replay file")->required();
  auto* compare = app.add_subcommand("compare", "compare <out>/estimates.csv against the oracle");
  add_common(compare, flags);
  compare->add_option("--obs", flags.obs, "observation replay file used by the filter run")->required();
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over sweep.axis");
  add_common(sweep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    auto config = ex::load_config(flags.config);
    if (flags.seed_override) config.run.seed = *flags.seed_override;
    const fs::path out = flags.out.empty() ? fs::path(config.run.out) : fs::path(flags.out);

    if (precompute->parsed()) {
      const fs::path file = flags.out.empty() ? out / "table.txt" : out;
      std::cout << ex::cmd_precompute(config, file).string() << '\n';
    } else if (simulate->parsed()) {
      for (const auto& f : ex::cmd_simulate(config, out)) std::cout << f.string() << '\n';
    } else if (filter->parsed()) {
      for (const auto& f : ex::cmd_filter(config, flags.table, flags.obs, out)) std::cout << f.string() << '\n';
    } else if (compare->parsed()) {
      for (const auto& f : ex::cmd_compare(config, flags.obs, out)) std::cout << f.string() << '\n';
    } else if (sweep->parsed()) {
      std::cout << ex::cmd_sweep(config, out).string() << '\n';
    }
  } catch (const zakai::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
