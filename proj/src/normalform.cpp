#include "secgame/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "secgame/error.hpp"

namespace secgame::normalform {

namespace {

constexpr double kUtilityCheckTol = 1e-9;
constexpr double kIndifferenceTol = 1e-12;

void check_utilities(const model::Utilities& closed, const model::Utilities& direct,
                     const char* where) {
  auto off = [](double a, double b) {
    return std::abs(a - b) > kUtilityCheckTol * std::max(1.0, std::abs(a));
  };
  if (off(closed.defender, direct.defender) || off(closed.attacker, direct.attacker)) {
    throw Error(ErrorKind::InternalInconsistency,
                std::string(where) + ": closed-form utilities disagree with direct evaluation");
  }
}

std::vector<double> upper_bounds(const FacilityProfile& profile, double defense_cost) {
  std::vector<double> upper(profile.size(), 0.0);
  for (std::size_t e = 0; e < profile.size(); ++e) {
    const double gap = profile.cost_increase(e);
    if (gap > 0.0) upper[e] = defense_cost / gap;
  }
  return upper;
}

NormalFormEquilibrium no_attack_equilibrium(const FacilityProfile& profile,
                                            const CostParams& params, NeRegimeLabel label) {
  NormalFormEquilibrium eq;
  eq.regime = std::move(label);
  eq.effort = EffortVector::zeros(profile.size());
  eq.canonical_attack = AttackDistribution::no_attack_only(profile.size());
  eq.attack_set.upper = upper_bounds(profile, params.defense_cost());
  eq.defender_utility = -profile.baseline_cost();
  eq.attacker_utility = profile.baseline_cost();
  return eq;
}

}  // namespace

bool near_boundary(double x, double y) {
  return std::abs(x - y) <= kBoundaryRelTol * std::max(std::abs(x), std::abs(y));
}

std::string NeRegimeLabel::to_string() const {
  switch (kind) {
    case Kind::TypeI: return "I-" + std::to_string(index);
    case Kind::TypeII: return "II-" + std::to_string(index);
    case Kind::Boundary: break;
  }
  return "boundary";
}

double threshold_attack_prob(const FacilityProfile& profile, const CostParams& params,
                             FacilityIndex e) {
  const double gap = profile.cost_increase(e);
  if (!(gap > 0.0)) {
    throw Error(ErrorKind::NotInIncreasedSet,
                "facility '" + profile.id(e) + "' does not increase the usage cost");
  }
  return params.defense_cost() / gap;
}

std::optional<double> cd_threshold_bar(const FacilityProfile& profile, double attack_cost) {
  double s = 0.0;
  bool any = false;
  for (FacilityIndex e : model::vulnerable_set(profile, attack_cost)) {
    s += 1.0 / profile.cost_increase(e);
    any = true;
  }
  if (!any) return std::nullopt;
  return 1.0 / s;
}

DefenseBand locate_defense_band(const CostLadder& ladder, std::size_t i, double defense_cost) {
  for (std::size_t k = 1; k <= i; ++k) {
    if (near_boundary(defense_cost, ladder.band_threshold(k))) return {DefenseBand::Where::Edge, 0};
  }
  if (defense_cost < ladder.band_threshold(i)) return {DefenseBand::Where::Below, 0};
  std::size_t j = 1;
  while (!(defense_cost > ladder.band_threshold(j))) ++j;
  return {DefenseBand::Where::Band, j};
}

NeRegimeLabel classify_regime_ne(const FacilityProfile& profile, const CostParams& params) {
  using Kind = NeRegimeLabel::Kind;
  if (model::classify_facilities(profile).increased.empty()) {
    return {Kind::TypeI, 0, "no facility increases the usage cost"};
  }
  const CostLadder ladder(profile);
  const double ca = params.attack_cost();
  for (std::size_t k = 1; k <= ladder.K(); ++k) {
    if (near_boundary(ca, ladder.gap(k))) {
      return {Kind::Boundary, 0, "attack cost equals C(" + std::to_string(k) + ")-C0"};
    }
  }
  const std::size_t i = ladder.vulnerable_groups(ca);
  if (i == 0) return {Kind::TypeI, 0, "no vulnerable facility"};
  const DefenseBand band = locate_defense_band(ladder, i, params.defense_cost());
  switch (band.where) {
    case DefenseBand::Where::Edge:
      return {Kind::Boundary, 0, "defense cost on a band threshold"};
    case DefenseBand::Where::Below:
      return {Kind::TypeI, static_cast<int>(i), ""};
    case DefenseBand::Where::Band:
      break;
  }
  return {Kind::TypeII, static_cast<int>(band.j), ""};
}

EffortVector type_two_effort(const FacilityProfile& profile, const CostLadder& ladder,
                             std::size_t j) {
  std::vector<double> rho(profile.size(), 0.0);
  const double cj = ladder.group(j).cost;
  for (std::size_t k = 1; k < j; ++k) {
    const double value = (ladder.group(k).cost - cj) / ladder.gap(k);
    for (FacilityIndex e : ladder.group(k).members) rho[e] = value;
  }
  return EffortVector(std::move(rho));
}

AttackDistribution type_two_attack(const FacilityProfile& profile, const CostLadder& ladder,
                                   double defense_cost, std::size_t j) {
  std::vector<double> sigma(profile.size(), 0.0);
  for (std::size_t k = 1; k < j; ++k) {
    for (FacilityIndex e : ladder.group(k).members) sigma[e] = defense_cost / ladder.gap(k);
  }
  const double residual = 1.0 - defense_cost * ladder.inverse_sum(j - 1);
  const double share = residual / ladder.count(j);
  for (FacilityIndex e : ladder.group(j).members) sigma[e] = share;
  return AttackDistribution(std::move(sigma), 0.0);
}

double type_two_defender_utility(const CostLadder& ladder, double defense_cost, std::size_t j) {
  const double cj = ladder.group(j).cost;
  double s = 0.0;
  for (std::size_t k = 1; k < j; ++k) {
    s += (ladder.group(k).cost - cj) * defense_cost * ladder.count(k) / ladder.gap(k);
  }
  return -cj - s;
}

NormalFormEquilibrium solve_ne(const FacilityProfile& profile, const CostParams& params) {
  using Kind = NeRegimeLabel::Kind;
  NeRegimeLabel label = classify_regime_ne(profile, params);
  if (label.kind == Kind::Boundary) {
    throw Error(ErrorKind::BoundaryParameters,
                "cost parameters lie on a regime boundary (" + label.note +
                    "); solve the attacker LP instead");
  }
  if (label.index == 0) return no_attack_equilibrium(profile, params, std::move(label));

  const CostLadder ladder(profile);
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  const auto idx = static_cast<std::size_t>(label.index);

  NormalFormEquilibrium eq;
  eq.attack_set.upper = upper_bounds(profile, cd);
  model::Utilities closed{};
  if (label.kind == Kind::TypeI) {
    std::vector<double> rho(profile.size(), 0.0);
    std::vector<double> sigma(profile.size(), 0.0);
    double attacked = 0.0;
    for (std::size_t k = 1; k <= idx; ++k) {
      const double gap = ladder.gap(k);
      for (FacilityIndex e : ladder.group(k).members) {
        rho[e] = (ladder.group(k).cost - ca - profile.baseline_cost()) / gap;
        sigma[e] = cd / gap;
        attacked += sigma[e];
        eq.attack_set.fixed.push_back(e);
      }
    }
    eq.effort = EffortVector(std::move(rho));
    eq.canonical_attack = AttackDistribution(std::move(sigma), 1.0 - attacked);
    closed = {-profile.baseline_cost() - ladder.count_sum(idx) * cd, profile.baseline_cost()};
  } else {
    eq.effort = type_two_effort(profile, ladder, idx);
    eq.canonical_attack = type_two_attack(profile, ladder, cd, idx);
    for (std::size_t k = 1; k < idx; ++k) {
      for (FacilityIndex e : ladder.group(k).members) eq.attack_set.fixed.push_back(e);
    }
    eq.attack_set.free = ladder.group(idx).members;
    eq.attack_set.free_mass = 1.0 - cd * ladder.inverse_sum(idx - 1);
    closed = {type_two_defender_utility(ladder, cd, idx), ladder.group(idx).cost - ca};
  }
  std::sort(eq.attack_set.fixed.begin(), eq.attack_set.fixed.end());
  check_utilities(closed, model::expected_utilities(eq.effort, eq.canonical_attack, profile, params),
                  "solve_ne");
  eq.defender_utility = closed.defender;
  eq.attacker_utility = closed.attacker;
  eq.regime = std::move(label);
  return eq;
}

std::vector<EffortResponse> defender_best_response(const AttackDistribution& sigma_a,
                                                   const FacilityProfile& profile,
                                                   const CostParams& params) {
  if (sigma_a.size() != profile.size()) {
    throw Error(ErrorKind::InvalidInput, "attack vector must cover every facility");
  }
  std::vector<EffortResponse> out(profile.size(), EffortResponse::Zero);
  for (std::size_t e = 0; e < profile.size(); ++e) {
    const double gap = profile.cost_increase(e);
    if (!(gap > 0.0)) continue;
    const double threshold = params.defense_cost() / gap;
    if (std::abs(sigma_a[e] - threshold) <= kIndifferenceTol) {
      out[e] = EffortResponse::Free;
    } else if (sigma_a[e] > threshold) {
      out[e] = EffortResponse::One;
    }
  }
  return out;
}

LinearProgram build_attacker_lp(const FacilityProfile& profile, const CostParams& params) {
  const model::FacilitySet targets = model::classify_facilities(profile).increased;
  if (targets.empty()) {
    throw Error(ErrorKind::EmptyVulnerableUniverse, "no facility increases the usage cost");
  }
  const std::size_t m = targets.size();
  const std::size_t n = 2 * m + 1;
  const std::size_t none = m;
  auto v_of = [m](std::size_t t) { return m + 1 + t; };
  const double c0 = profile.baseline_cost();
  const double ca = params.attack_cost();
  const double inf = std::numeric_limits<double>::infinity();

  LinearProgram lp;
  lp.labels.resize(n);
  lp.objective.assign(n, 0.0);
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, inf);
  for (std::size_t t = 0; t < m; ++t) {
    lp.labels[t] = "sigma(" + profile.id(targets[t]) + ")";
    lp.labels[v_of(t)] = "v(" + profile.id(targets[t]) + ")";
    lp.objective[v_of(t)] = 1.0;
    lp.lower[v_of(t)] = -inf;
  }
  lp.labels[none] = "sigma(none)";
  lp.objective[none] = c0;

  // sigma(e) (C0 - c_a) + c_d - v_e >= 0
  for (std::size_t t = 0; t < m; ++t) {
    InequalityRow row{std::vector<double>(n, 0.0), RowSense::GreaterEqual, -params.defense_cost()};
    row.coeffs[t] = c0 - ca;
    row.coeffs[v_of(t)] = -1.0;
    lp.inequalities.push_back(std::move(row));
  }
  // sigma(e) (Ce - c_a) - v_e >= 0
  for (std::size_t t = 0; t < m; ++t) {
    InequalityRow row{std::vector<double>(n, 0.0), RowSense::GreaterEqual, 0.0};
    row.coeffs[t] = profile.post_attack_cost(targets[t]) - ca;
    row.coeffs[v_of(t)] = -1.0;
    lp.inequalities.push_back(std::move(row));
  }
  EqualityRow sum{std::vector<double>(n, 0.0), 1.0};
  for (std::size_t t = 0; t <= m; ++t) sum.coeffs[t] = 1.0;
  lp.equalities.push_back(std::move(sum));
  return lp;
}

}  // namespace secgame::normalform
