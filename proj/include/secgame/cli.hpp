#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "secgame/analysis.hpp"
#include "secgame/learning.hpp"
#include "secgame/model.hpp"
#include "secgame/routing.hpp"

namespace secgame::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kBoundary = 2, kInternal = 3 };

struct LearningSection {
  double noise = 0.0;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  /// "empty", an edge id, "ne" or "spe".
  std::string state = "ne";
  /// Unset means a uniform prior.
  std::optional<std::vector<double>> prior;
};

struct Scenario {
  std::optional<model::FacilityProfile> profile;
  std::optional<model::CostParams> params;
  std::optional<routing::RoutedNetwork> network;
  std::optional<LearningSection> learning;
};

/// Parses the sectioned key = value format. Throws Error(InvalidInput) with
/// "<source>:<line>: ..." messages. Numbers may be decimals or a/b fractions.
Scenario parse_scenario(std::istream& in, const std::string& source = "<input>");
Scenario load_scenario(const std::string& path);

/// Parses "lo:hi:n" pairs as in "0:4:200,0:4:200".
std::pair<analysis::AxisRange, analysis::AxisRange> parse_grid(const std::string& text);

/// Every printed number uses this: 9 significant digits.
std::string fmt(double x);

struct VerifyOptions {
  double eps = 1e-9;
  double grid_step = 1e-3;
  /// Added to the equilibrium effort and the claimed sequential utility before checking.
  double perturb = 0.0;
};

struct SimulateOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
};

// Each command writes its report to `out`, diagnostics to `err`, and
// returns an ExitCode.
int cmd_solve_ne(const Scenario& sc, std::ostream& out, std::ostream& err);
int cmd_solve_spe(const Scenario& sc, std::ostream& out, std::ostream& err,
                  double grid_step = 1e-3);
int cmd_regimes(const Scenario& sc, const std::optional<std::string>& grid, std::ostream& out,
                std::ostream& err);
int cmd_compare(const Scenario& sc, std::ostream& out, std::ostream& err);
int cmd_verify(const Scenario& sc, const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const Scenario& sc, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err);

/// Maps library error kinds onto exit codes.
int exit_code_for(const std::exception& e);

}  // namespace secgame::cli
