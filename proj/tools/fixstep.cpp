#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "fixstep/cli.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool allow_uncertified = false;
  bool print_config = false;
};

int dispatch(fixstep::cli::Command command, const Overrides& o) {
  using namespace fixstep;
  std::ifstream f(o.config_path);
  if (!f) {
    std::cerr << "error: cannot read " << o.config_path << '\n';
    return 2;
  }
  std::stringstream text;
  text << f.rdbuf();
  cli::RunConfig config;
  try {
    config = cli::parse_config(text.str());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  config.run.command = command;
  if (o.seed) config.run.seed = *o.seed;
  if (o.out) config.run.out = *o.out;
  if (o.allow_uncertified) config.run.allow_uncertified = true;
  if (o.print_config) {
    std::cout << cli::render_config(config);
    return 0;
  }
  return cli::execute(config, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  using fixstep::cli::Command;
  CLI::App app{"Fixed-step descent methods with per-step contraction certificates"};
  app.require_subcommand(1);

  Overrides o;
  const std::pair<Command, const char*> commands[] = {
      {Command::Run, "Certify every step of one run"},
      {Command::Certify, "Certify runs from many random starts"},
      {Command::Sweep, "Certify one step per start over a grid of step sizes"},
      {Command::WorstCase, "Run a witness instance on which the bound is attained"},
      {Command::MinCond, "Scan 2x2 metrics for the minimal condition number at angle theta"},
  };
  for (const auto& [command, help] : commands) {
    auto* sub = app.add_subcommand(std::string(fixstep::cli::command_name(command)), help);
    sub->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Master seed (overrides run.seed)");
    sub->add_option("--out", o.out, "CSV output path (overrides run.out)");
    sub->add_flag("--allow-uncertified", o.allow_uncertified, "Permit step sizes past the certified limit");
    sub->add_flag("--print-config", o.print_config, "Print the effective config and exit");
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& [command, help] : commands) {
    if (app.got_subcommand(std::string(fixstep::cli::command_name(command)))) return dispatch(command, o);
  }
  return 2;
}
