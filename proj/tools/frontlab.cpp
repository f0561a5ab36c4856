#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frontlab/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"frontlab: reachable sets, limit shapes and front homogenization"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  for (const char* name : {"reach", "average", "rotation", "homogenize", "drift", "noncoercive"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config, "experiment config file")->required();
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the environment seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return frontlab::run_command(app.get_subcommands().front()->get_name(), config, out, seed, std::cerr);
}
