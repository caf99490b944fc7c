#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secgame/linear_program.hpp"
#include "secgame/model.hpp"

namespace secgame::normalform {

using model::AttackDistribution;
using model::CostLadder;
using model::CostParams;
using model::EffortVector;
using model::FacilityIndex;
using model::FacilityProfile;
using model::FacilitySet;

/// Relative tolerance used to decide that a parameter sits on a regime edge.
inline constexpr double kBoundaryRelTol = 1e-12;

/// True when x and y agree to within kBoundaryRelTol relative to their size.
bool near_boundary(double x, double y);

struct NeRegimeLabel {
  enum class Kind { TypeI, TypeII, Boundary };
  Kind kind = Kind::Boundary;
  int index = 0;
  std::string note;

  /// "I-3", "II-1" or "boundary".
  std::string to_string() const;
  friend bool operator==(const NeRegimeLabel& a, const NeRegimeLabel& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

/// The attacker's equilibrium set in a regime: a box plus one sum constraint.
/// Facilities in `fixed` are targeted with exactly their upper bound; the
/// facilities in `free` share `free_mass` with 0 <= sigma(e) <= upper(e).
struct AttackSetBounds {
  std::vector<double> upper;
  FacilitySet fixed;
  FacilitySet free;
  double free_mass = 0.0;
};

struct NormalFormEquilibrium {
  NeRegimeLabel regime;
  EffortVector effort;
  AttackDistribution canonical_attack;
  AttackSetBounds attack_set;
  double defender_utility = 0.0;
  double attacker_utility = 0.0;
};

enum class EffortResponse { Zero, One, Free };

/// c_d / (Ce - C0). Throws NotInIncreasedSet when Ce <= C0.
double threshold_attack_prob(const FacilityProfile& profile, const CostParams& params,
                             FacilityIndex e);

/// Reciprocal of sum over vulnerable e of 1/(Ce - C0); empty when nothing is vulnerable.
std::optional<double> cd_threshold_bar(const FacilityProfile& profile, double attack_cost);

NeRegimeLabel classify_regime_ne(const FacilityProfile& profile, const CostParams& params);

/// Closed-form equilibrium. Throws BoundaryParameters on a regime edge; the
/// attacker LP from build_attacker_lp remains usable there.
NormalFormEquilibrium solve_ne(const FacilityProfile& profile, const CostParams& params);

/// Per-facility best response of the defender; equality with the threshold
/// is tested to 1e-12 absolute.
std::vector<EffortResponse> defender_best_response(const AttackDistribution& sigma_a,
                                                   const FacilityProfile& profile,
                                                   const CostParams& params);

/// Variables: sigma(e) for e with Ce > C0 (profile order), sigma(none), v_e.
LinearProgram build_attacker_lp(const FacilityProfile& profile, const CostParams& params);

/// Effort of the type-II regime j: (C(k) - C(j)) / (C(k) - C0) on groups k < j.
EffortVector type_two_effort(const FacilityProfile& profile, const CostLadder& ladder,
                             std::size_t j);

/// Canonical attacker strategy of type-II regime j: threshold probability on
/// groups k < j, the residual spread uniformly over group j.
AttackDistribution type_two_attack(const FacilityProfile& profile, const CostLadder& ladder,
                                   double defense_cost, std::size_t j);

/// -C(j) - sum_{k<j} (C(k) - C(j)) c_d E(k) / (C(k) - C0).
double type_two_defender_utility(const CostLadder& ladder, double defense_cost, std::size_t j);

/// Where c_d falls on the band ladder t_1 > t_2 > ... > t_i, with
/// t_k = (sum_{l<=k} E(l)/(C(l)-C0))^{-1} and i >= 1 vulnerable groups.
struct DefenseBand {
  enum class Where { Below, Band, Edge };
  Where where;
  /// For Band: the j with t_j < c_d < t_{j-1} (t_0 = +inf).
  std::size_t j = 0;
};

DefenseBand locate_defense_band(const CostLadder& ladder, std::size_t i, double defense_cost);

}  // namespace secgame::normalform
