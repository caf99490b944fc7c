#pragma once

#include <string>

#include "secgame/model.hpp"
#include "secgame/normalform.hpp"

namespace secgame::sequential {

using model::AttackDistribution;
using model::CostLadder;
using model::CostParams;
using model::EffortVector;
using model::FacilityIndex;
using model::FacilityProfile;
using model::FacilitySet;

struct SpeRegimeLabel {
  enum class Kind { TypeITilde, TypeIITilde, Boundary };
  Kind kind = Kind::Boundary;
  int index = 0;
  std::string note;

  /// "I~-3", "II~-2" or "boundary".
  std::string to_string() const;
  friend bool operator==(const SpeRegimeLabel& a, const SpeRegimeLabel& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

/// Second-stage attacker behaviour on the equilibrium path.
struct OnPathAttack {
  bool deterred = true;
  /// Admissible targets when not deterred: the union of groups 1..j.
  FacilitySet support;
  /// Deterred: no attack with probability one. Otherwise one admissible
  /// distribution over `support` (mirrors the simultaneous-game canonical strategy).
  AttackDistribution witness;
};

struct SpeOutcome {
  SpeRegimeLabel regime;
  EffortVector effort;
  OnPathAttack on_path;
  double defender_utility = 0.0;
  double attacker_utility = 0.0;
};

struct BestResponseSet {
  enum class Kind { DeterredMix, ForcedAttack };
  Kind kind = Kind::DeterredMix;
  /// DeterredMix: vulnerable facilities secured exactly at threshold (the
  /// no-attack action is always in the support as well). ForcedAttack: the
  /// vulnerable facilities maximising expected usage cost.
  FacilitySet support;
};

/// (Ce - c_a - C0) / (Ce - C0). Throws NotInIncreasedSet when Ce <= C0.
double threshold_effort(const FacilityProfile& profile, double attack_cost, FacilityIndex e);

/// Equality and ties are tested to 1e-12 absolute.
BestResponseSet attacker_br_sequential(const EffortVector& rho, const FacilityProfile& profile,
                                       const CostParams& params);

/// The boundary function c_d^{ij}(c_a) for 1 <= j <= i <= K.
/// Throws NonpositiveDenominator when c_a lies outside the branch's range.
double cd_ij(const FacilityProfile& profile, double attack_cost, std::size_t i, std::size_t j);
double cd_ij(const CostLadder& ladder, double attack_cost, std::size_t i, std::size_t j);

/// Threshold between full deterrence and attack. Defined for 0 <= c_a < C(1)-C0;
/// throws OutOfDomain elsewhere.
double cd_threshold_tilde(const FacilityProfile& profile, double attack_cost);
double cd_threshold_tilde(const CostLadder& ladder, double attack_cost);

/// Inverse of cd_threshold_tilde by bisection to 1e-12 absolute in c_a.
/// Throws BelowRange when c_d < cd_threshold_tilde(0).
double cd_tilde_inverse(const FacilityProfile& profile, double defense_cost);

SpeRegimeLabel classify_regime_spe(const FacilityProfile& profile, const CostParams& params);

/// Closed-form subgame-perfect outcome. Throws BoundaryParameters on a regime edge.
SpeOutcome solve_spe(const FacilityProfile& profile, const CostParams& params);

}  // namespace secgame::sequential
