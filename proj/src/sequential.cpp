#include "secgame/sequential.hpp"

#include <algorithm>
#include <cmath>

#include "secgame/error.hpp"

namespace secgame::sequential {

namespace {

constexpr double kEqualityTol = 1e-12;
constexpr double kBisectionTol = 1e-12;
constexpr double kUtilityCheckTol = 1e-9;

using normalform::DefenseBand;
using normalform::near_boundary;

// -C0 - c_d * sum_{k<=i} E(k) (C(k) - c_a - C0) / (C(k) - C0)
double deterrence_utility(const CostLadder& ladder, double ca, double cd, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 1; k <= i; ++k) {
    s += (ladder.gap(k) - ca) * ladder.count(k) / ladder.gap(k);
  }
  return -ladder.baseline() - s * cd;
}

EffortVector threshold_effort_vector(const FacilityProfile& profile, const CostLadder& ladder,
                                     double ca, std::size_t i) {
  std::vector<double> rho(profile.size(), 0.0);
  for (std::size_t k = 1; k <= i; ++k) {
    const double value = (ladder.group(k).cost - ca - ladder.baseline()) / ladder.gap(k);
    for (FacilityIndex e : ladder.group(k).members) rho[e] = value;
  }
  return EffortVector(std::move(rho));
}

SpeOutcome deterred_outcome(const FacilityProfile& profile, SpeRegimeLabel label,
                            EffortVector effort, double ud) {
  SpeOutcome out;
  out.regime = std::move(label);
  out.effort = std::move(effort);
  out.on_path.deterred = true;
  out.on_path.witness = AttackDistribution::no_attack_only(profile.size());
  out.defender_utility = ud;
  out.attacker_utility = profile.baseline_cost();
  return out;
}

}  // namespace

std::string SpeRegimeLabel::to_string() const {
  switch (kind) {
    case Kind::TypeITilde: return "I~-" + std::to_string(index);
    case Kind::TypeIITilde: return "II~-" + std::to_string(index);
    case Kind::Boundary: break;
  }
  return "boundary";
}

double threshold_effort(const FacilityProfile& profile, double attack_cost, FacilityIndex e) {
  const double gap = profile.cost_increase(e);
  if (!(gap > 0.0)) {
    throw Error(ErrorKind::NotInIncreasedSet,
                "facility '" + profile.id(e) + "' does not increase the usage cost");
  }
  return (gap - attack_cost) / gap;
}

BestResponseSet attacker_br_sequential(const EffortVector& rho, const FacilityProfile& profile,
                                       const CostParams& params) {
  if (rho.size() != profile.size()) {
    throw Error(ErrorKind::InvalidInput, "effort vector must cover every facility");
  }
  const FacilitySet vulnerable = model::vulnerable_set(profile, params);
  const double ca = params.attack_cost();

  bool all_at_least = true;
  for (FacilityIndex e : vulnerable) {
    if (rho[e] < threshold_effort(profile, ca, e) - kEqualityTol) {
      all_at_least = false;
      break;
    }
  }
  BestResponseSet out;
  if (all_at_least) {
    out.kind = BestResponseSet::Kind::DeterredMix;
    for (FacilityIndex e : vulnerable) {
      if (std::abs(rho[e] - threshold_effort(profile, ca, e)) <= kEqualityTol) {
        out.support.push_back(e);
      }
    }
    return out;
  }
  out.kind = BestResponseSet::Kind::ForcedAttack;
  const double c0 = profile.baseline_cost();
  double best = -INFINITY;
  for (FacilityIndex e : vulnerable) {
    best = std::max(best, rho[e] * c0 + (1.0 - rho[e]) * profile.post_attack_cost(e));
  }
  for (FacilityIndex e : vulnerable) {
    const double cost = rho[e] * c0 + (1.0 - rho[e]) * profile.post_attack_cost(e);
    if (cost >= best - kEqualityTol) out.support.push_back(e);
  }
  return out;
}

double cd_ij(const CostLadder& ladder, double attack_cost, std::size_t i, std::size_t j) {
  if (!(j >= 1 && j <= i && i <= ladder.K())) {
    throw Error(ErrorKind::InvalidInput, "cd_ij needs 1 <= j <= i <= K");
  }
  const double gj = ladder.gap(j);
  const double tail_count = ladder.count_sum(i) - ladder.count_sum(j - 1);
  const double denom =
      gj * ladder.inverse_sum(j - 1) + tail_count - attack_cost * ladder.inverse_sum(i);
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::NonpositiveDenominator,
                "c_d^{" + std::to_string(i) + std::to_string(j) + "} is undefined at this attack cost");
  }
  return gj / denom;
}

double cd_ij(const FacilityProfile& profile, double attack_cost, std::size_t i, std::size_t j) {
  return cd_ij(CostLadder(profile), attack_cost, i, j);
}

double cd_threshold_tilde(const CostLadder& ladder, double attack_cost) {
  if (!(attack_cost >= 0.0 && attack_cost < ladder.gap(1))) {
    throw Error(ErrorKind::OutOfDomain, "c~_d needs 0 <= c_a < C(1)-C0");
  }
  const std::size_t i = ladder.vulnerable_groups(attack_cost);
  // Largest j whose tail sum_{k=j..i} E(k) / S_i still exceeds c_a.
  const double si = ladder.inverse_sum(i);
  std::size_t j = i;
  while (j > 1 && !((ladder.count_sum(i) - ladder.count_sum(j - 1)) / si > attack_cost)) --j;
  return cd_ij(ladder, attack_cost, i, j);
}

double cd_threshold_tilde(const FacilityProfile& profile, double attack_cost) {
  return cd_threshold_tilde(CostLadder(profile), attack_cost);
}

double cd_tilde_inverse(const FacilityProfile& profile, double defense_cost) {
  const CostLadder ladder(profile);
  const double floor = cd_threshold_tilde(ladder, 0.0);
  if (defense_cost < floor) {
    if (near_boundary(defense_cost, floor)) return 0.0;
    throw Error(ErrorKind::BelowRange, "c_d is below c~_d(0)");
  }
  double lo = 0.0;
  double hi = ladder.gap(1);
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cd_threshold_tilde(ladder, mid) < defense_cost) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SpeRegimeLabel classify_regime_spe(const FacilityProfile& profile, const CostParams& params) {
  using Kind = SpeRegimeLabel::Kind;
  if (model::classify_facilities(profile).increased.empty()) {
    return {Kind::TypeITilde, 0, "no facility increases the usage cost"};
  }
  const CostLadder ladder(profile);
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  for (std::size_t k = 1; k <= ladder.K(); ++k) {
    if (near_boundary(ca, ladder.gap(k))) {
      return {Kind::Boundary, 0, "attack cost equals C(" + std::to_string(k) + ")-C0"};
    }
  }
  const std::size_t i = ladder.vulnerable_groups(ca);
  if (i == 0) return {Kind::TypeITilde, 0, "no vulnerable facility"};

  const double tilde = cd_threshold_tilde(ladder, ca);
  if (near_boundary(cd, tilde)) return {Kind::Boundary, 0, "defense cost equals c~_d(c_a)"};
  if (cd < tilde) return {Kind::TypeITilde, static_cast<int>(i), ""};

  const DefenseBand band = normalform::locate_defense_band(ladder, i, cd);
  if (band.where == DefenseBand::Where::Edge) {
    return {Kind::Boundary, 0, "defense cost on a band threshold"};
  }
  if (band.where == DefenseBand::Where::Below) {
    throw Error(ErrorKind::InternalInconsistency, "c_d above c~_d but below c_bar_d");
  }
  return {Kind::TypeIITilde, static_cast<int>(band.j), ""};
}

SpeOutcome solve_spe(const FacilityProfile& profile, const CostParams& params) {
  using Kind = SpeRegimeLabel::Kind;
  SpeRegimeLabel label = classify_regime_spe(profile, params);
  if (label.kind == Kind::Boundary) {
    throw Error(ErrorKind::BoundaryParameters,
                "cost parameters lie on a regime boundary (" + label.note + ")");
  }
  if (label.index == 0) {
    return deterred_outcome(profile, std::move(label), EffortVector::zeros(profile.size()),
                            -profile.baseline_cost());
  }

  const CostLadder ladder(profile);
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  const std::size_t i = ladder.vulnerable_groups(ca);

  // Deterrence at the threshold efforts against the best effort that leaves
  // some vulnerable facility under-secured (the simultaneous-game effort).
  const double ud_deter = deterrence_utility(ladder, ca, cd, i);
  const DefenseBand band = normalform::locate_defense_band(ladder, i, cd);
  const bool attack_wins = band.where == DefenseBand::Where::Band &&
                           normalform::type_two_defender_utility(ladder, cd, band.j) > ud_deter;
  if (attack_wins != (label.kind == Kind::TypeIITilde)) {
    throw Error(ErrorKind::InternalInconsistency,
                "utility comparison disagrees with the c~_d regime classification");
  }

  if (!attack_wins) {
    SpeOutcome out = deterred_outcome(profile, std::move(label),
                                      threshold_effort_vector(profile, ladder, ca, i), ud_deter);
    const model::Utilities direct =
        model::expected_utilities(out.effort, out.on_path.witness, profile, params);
    if (std::abs(direct.defender - out.defender_utility) >
        kUtilityCheckTol * std::max(1.0, std::abs(out.defender_utility))) {
      throw Error(ErrorKind::InternalInconsistency, "solve_spe: deterrence utility mismatch");
    }
    return out;
  }

  const std::size_t j = band.j;
  SpeOutcome out;
  out.regime = std::move(label);
  out.effort = normalform::type_two_effort(profile, ladder, j);
  out.on_path.deterred = false;
  for (std::size_t k = 1; k <= j; ++k) {
    for (FacilityIndex e : ladder.group(k).members) out.on_path.support.push_back(e);
  }
  std::sort(out.on_path.support.begin(), out.on_path.support.end());
  out.on_path.witness = normalform::type_two_attack(profile, ladder, cd, j);
  out.defender_utility = normalform::type_two_defender_utility(ladder, cd, j);
  out.attacker_utility = ladder.group(j).cost - ca;
  const model::Utilities direct =
      model::expected_utilities(out.effort, out.on_path.witness, profile, params);
  auto off = [](double a, double b) {
    return std::abs(a - b) > kUtilityCheckTol * std::max(1.0, std::abs(a));
  };
  if (off(out.defender_utility, direct.defender) || off(out.attacker_utility, direct.attacker)) {
    throw Error(ErrorKind::InternalInconsistency, "solve_spe: attack-regime utility mismatch");
  }
  return out;
}

}  // namespace secgame::sequential
