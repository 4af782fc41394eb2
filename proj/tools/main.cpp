// ngpde-cli: solve, steady, ode, mc and compare experiments from an INI config.
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generating-function PDE of evolving networks: experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  cli::Overrides o;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t kmax = 0;
  double tol = 0.0;
  std::string constants;

  app.add_option("--config", config_path, "INI experiment configuration")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out, "output directory (overrides [output] dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  auto* kmax_opt = app.add_option("--kmax", kmax, "degree truncation for oracle and simulation");
  auto* tol_opt = app.add_option("--tol", tol, "characteristic solver relative tolerance");
  auto* const_opt =
      app.add_option("--constants", constants, "steady-state constants c1,c2,c3,c4,m");

  const std::map<std::string, std::function<void(const cli::ExperimentConfig&)>> commands{
      {"solve", cli::cmd_solve},   {"steady", cli::cmd_steady},   {"ode", cli::cmd_ode},
      {"mc", cli::cmd_mc},         {"compare", cli::cmd_compare}};
  app.add_subcommand("solve", "solution field G(x,t) and first moment g(t)");
  app.add_subcommand("steady", "steady state G* with residual");
  app.add_subcommand("ode", "truncated master equation for p_k(t)");
  app.add_subcommand("mc", "stochastic simulation against the master equation");
  app.add_subcommand("compare", "convergence to the steady state and rate verdict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*out_opt) o.out_dir = out;
  if (*seed_opt) o.seed = seed;
  if (*kmax_opt) o.kmax = kmax;
  if (*tol_opt) o.tol = tol;
  if (*const_opt) o.constants = constants;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (config_path.empty() && !(name == "steady" && o.constants)) {
      throw cli::ConfigError("--config is required");
    }
    const cli::ExperimentConfig c = cli::load_config(config_path, o);
    commands.at(name)(c);
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
    return 1;
  } catch (const cli::ApiError& e) {
    std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
    return static_cast<int>(e.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
    return 2;
  }
  return 0;
}
