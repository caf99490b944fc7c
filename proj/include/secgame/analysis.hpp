#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "secgame/model.hpp"
#include "secgame/normalform.hpp"
#include "secgame/sequential.hpp"

namespace secgame::analysis {

using model::CostParams;
using model::FacilityProfile;

/// L: the defender's first-move advantage costs no extra effort. M: it is
/// bought with more effort. H: there is none. NoVulnerable: nothing can be
/// profitably attacked, so both games collapse to no action.
enum class CostRegion { L, M, H, Boundary, NoVulnerable };
std::string to_string(CostRegion region);

CostRegion classify_cost_region(const FacilityProfile& profile, const CostParams& params);

struct GameComparison {
  CostRegion region = CostRegion::Boundary;
  normalform::NormalFormEquilibrium ne;
  sequential::SpeOutcome spe;
  bool first_mover_advantage = false;
  /// Uds - Ud.
  double utility_gap = 0.0;
};

/// Solves both games and checks the relations each region implies.
/// Throws BoundaryParameters on a boundary and InternalInconsistency when a
/// relation fails.
GameComparison compare_games(const FacilityProfile& profile, const CostParams& params);

/// `steps` cells over (lo, hi); samples sit at cell centres.
struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;
  double at(std::size_t k) const;
};

struct SweepRow {
  double ca = 0.0;
  double cd = 0.0;
  normalform::NeRegimeLabel ne;
  sequential::SpeRegimeLabel spe;
  CostRegion region = CostRegion::Boundary;
  // Empty when the corresponding equilibrium sits on a boundary.
  std::optional<double> ud;
  std::optional<double> uds;
  std::optional<double> ua;
  std::optional<double> uas;
};

/// Rows ordered with c_a outer and c_d inner. Cells are evaluated in parallel
/// when built with OpenMP; output is identical to regime_sweep_serial.
std::vector<SweepRow> regime_sweep(const FacilityProfile& profile, const AxisRange& ca,
                                   const AxisRange& cd);
std::vector<SweepRow> regime_sweep_serial(const FacilityProfile& profile, const AxisRange& ca,
                                          const AxisRange& cd);

SweepRow sweep_cell(const FacilityProfile& profile, double ca, double cd);

/// Header plus one line per row, numbers with 9 significant digits.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace secgame::analysis
