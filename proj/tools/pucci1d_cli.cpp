// Batch front end: omega|solve|branch|certify|sweep --config <path> --out <dir>
#include <string>

#include <CLI11.hpp>

#include "pucci1d/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"solver and verifier for -M(u'') + V(x) u = f(u) on the line"};
  app.require_subcommand(1);

  std::string config, out = "out";
  for (const char* name : {"omega", "solve", "branch", "certify", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "scenario config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default: out)");
  }

  CLI11_PARSE(app, argc, argv);
  std::string task = app.get_subcommands().front()->get_name();
  return pucci1d::run_scenario_file(config, out, task);
}
