#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "secgame/cli.hpp"

namespace {

using secgame::cli::Scenario;

// Runs `body` with output routed to --out when given.
int with_output(const std::string& out_path, const std::function<int(std::ostream&)>& body) {
  if (out_path.empty()) return body(std::cout);
  std::ostringstream buf;
  const int code = body(buf);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return secgame::cli::kInputError;
  }
  file << buf.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attacker-defender facility security game solver"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string grid;
  double eps = 1e-9;
  double grid_step = 1e-3;
  double perturb = 0.0;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "scenario file")->required();
    sub->add_option("--out", out_path, "write the report or CSV here instead of stdout");
  };
  auto* ne = app.add_subcommand("solve-ne", "Nash equilibrium of the simultaneous game");
  common(ne);
  auto* spe = app.add_subcommand("solve-spe", "subgame-perfect equilibrium of the sequential game");
  common(spe);
  spe->add_option("--grid-step", grid_step, "effort grid step for the boundary fallback");
  auto* regimes = app.add_subcommand("regimes", "regime sweep over (c_a, c_d) as CSV");
  common(regimes);
  auto* grid_opt = regimes->add_option("--grid", grid, "ca0:ca1:n,cd0:cd1:m");
  auto* compare = app.add_subcommand("compare", "cost region and first-mover gap");
  common(compare);
  auto* verify = app.add_subcommand("verify", "check closed forms against the oracles");
  common(verify);
  verify->add_option("--eps", eps, "equilibrium tolerance");
  verify->add_option("--grid-step", grid_step, "effort grid step for the sequential check");
  verify->add_option("--perturb", perturb, "inject an error of this size before checking");
  auto* simulate = app.add_subcommand("simulate", "repeated routing with Bayesian learning");
  common(simulate);
  auto* seed_opt = simulate->add_option("--seed", seed, "RNG seed (overrides the scenario)");
  auto* horizon_opt = simulate->add_option("--horizon", horizon, "number of stages")
                          ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return secgame::cli::kInputError;
  }

  try {
    const Scenario sc = secgame::cli::load_scenario(scenario_path);
    return with_output(out_path, [&](std::ostream& out) {
      if (ne->parsed()) return secgame::cli::cmd_solve_ne(sc, out, std::cerr);
      if (spe->parsed()) return secgame::cli::cmd_solve_spe(sc, out, std::cerr, grid_step);
      if (regimes->parsed()) {
        return secgame::cli::cmd_regimes(
            sc, grid_opt->count() ? std::optional<std::string>(grid) : std::nullopt, out, std::cerr);
      }
      if (compare->parsed()) return secgame::cli::cmd_compare(sc, out, std::cerr);
      if (verify->parsed()) return secgame::cli::cmd_verify(sc, {eps, grid_step, perturb}, out, std::cerr);
      secgame::cli::SimulateOptions opts;
      if (seed_opt->count()) opts.seed = seed;
      if (horizon_opt->count()) opts.horizon = horizon;
      return secgame::cli::cmd_simulate(sc, opts, out, std::cerr);
    });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return secgame::cli::exit_code_for(e);
  }
}
