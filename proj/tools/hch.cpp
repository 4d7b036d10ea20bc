#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hch/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hch: pseudo-spectral hyperbolic Cahn-Hilliard simulator and verification toolkit"};
  app.require_subcommand(1);
  hch::CommandOptions opt;
  std::string output_dir;
  std::uint64_t seed = 0;
  for (const auto& name : hch::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration");
    sub->add_option("--output-dir", output_dir, "run directory (overrides output_dir)");
    sub->add_option("--seed", seed, "top-level seed override");
    sub->add_flag("--quiet", opt.quiet, "suppress the summary on standard output");
    if (name == "check") sub->add_option("--only", opt.only, "run only the named checks");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hch::kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--output-dir")) opt.output_dir = output_dir;
  if (sub->count("--seed")) opt.seed = seed;
  return hch::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
