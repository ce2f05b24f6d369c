// pcehinf: command-line front end.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pcehinf/cli.hpp"

namespace {

struct Flags {
  std::string config, plant, out, mode, gain, sdpa;
  std::uint64_t seed = 0;
  int degree = 0, grid = 0, mc = 0, restarts = 0;
  double rho2 = 0.0, rho2_hi = 0.0;
  bool with_synthesis = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-infinity static output feedback for plants with polynomial-chaos parameters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PCEHINF_VERSION));

  Flags f;
  std::map<std::string, CLI::Option*> given;
  const std::pair<const char*, const char*> commands[] = {
      {"transform", "write the expanded (Galerkin) system matrices"},
      {"synthesize", "design a gain; with --rho2-hi, bisect the robustness level"},
      {"analyze", "stability report and per-sample norm distribution of a gain"},
      {"evaluate", "Monte-Carlo vs expanded trajectories and transform errors"},
      {"reproduce-table1", "norm table of the published reference gains"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto add = [&](const std::string& flag, auto& var, const std::string& desc) {
      CLI::Option* o = sub->add_option(flag, var, desc);
      given[std::string(name) + flag] = o;
      return o;
    };
    add("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    add("--plant", f.plant, "plant JSON file");
    add("--out", f.out, "output directory");
    add("--seed", f.seed, "random seed");
    add("--degree", f.degree, "PCE degree p");
    add("--rho2", f.rho2, "robustness level rho^2");
    add("--grid", f.grid, "parameter grid points per dimension");
    add("--mc", f.mc, "Monte-Carlo sample count");
    add("--mode", f.mode, "worst-case | nominal-pce | robust-pce");
    add("--gain", f.gain, "gain CSV file");
    add("--restarts", f.restarts, "synthesis restarts");
    add("--rho2-hi", f.rho2_hi, "upper end of the rho^2 bisection");
    add("--sdpa", f.sdpa, "dump the certificate LMI in SDPA format");
    given[std::string(name) + "--with-synthesis"] =
        sub->add_flag("--with-synthesis", f.with_synthesis, "also synthesize the robust rows");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  auto set = [&](const std::string& flag) { return given[cmd + flag]->count() > 0; };
  try {
    pcehinf::RunConfig cfg;
    if (set("--config")) {
      cfg = pcehinf::load_run_config(f.config);
      if (!cfg.command.empty() && cfg.command != cmd) {
        std::cerr << "error: config is for '" << cfg.command << "', not '" << cmd << "'\n";
        return static_cast<int>(pcehinf::ErrorKind::InvalidArgument);
      }
    }
    cfg.command = cmd;
    if (set("--plant")) cfg.plant = f.plant;
    if (set("--out")) cfg.out = f.out;
    if (set("--seed")) cfg.seed = f.seed;
    if (set("--degree")) cfg.degree = f.degree;
    if (set("--rho2")) cfg.rho2 = f.rho2;
    if (set("--grid")) cfg.grid = f.grid;
    if (set("--mc")) cfg.mc = f.mc;
    if (set("--mode")) cfg.mode = f.mode;
    if (set("--gain")) {
      cfg.gain_file = f.gain;
      cfg.gain.reset();
    }
    if (set("--restarts")) cfg.restarts = f.restarts;
    if (set("--rho2-hi")) cfg.rho2_hi = f.rho2_hi;
    if (set("--sdpa")) cfg.sdpa = f.sdpa;
    if (set("--with-synthesis")) cfg.with_synthesis = f.with_synthesis;
    pcehinf::run(cfg, std::cout);
  } catch (const pcehinf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
