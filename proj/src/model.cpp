#include "secgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "secgame/error.hpp"

namespace secgame::model {

namespace {

constexpr double kSumTolerance = 1e-12;

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::InvalidInput, what);
}

bool contains(const FacilitySet& set, FacilityIndex e) {
  return std::binary_search(set.begin(), set.end(), e);
}

}  // namespace

FacilityProfile::FacilityProfile(std::vector<std::string> ids, double baseline_cost,
                                 std::vector<double> post_attack_cost)
    : ids_(std::move(ids)), baseline_(baseline_cost), post_(std::move(post_attack_cost)) {
  require(!ids_.empty(), "facility profile needs at least one facility");
  require(ids_.size() == post_.size(), "every facility needs a post-attack cost");
  require(std::isfinite(baseline_), "baseline cost must be finite");
  std::set<std::string_view> seen;
  for (std::size_t e = 0; e < ids_.size(); ++e) {
    require(!ids_[e].empty(), "facility identifiers must be non-empty");
    require(seen.insert(ids_[e]).second, "duplicate facility identifier '" + ids_[e] + "'");
    require(std::isfinite(post_[e]), "post-attack cost of '" + ids_[e] + "' must be finite");
  }
}

std::optional<FacilityIndex> FacilityProfile::find(std::string_view id) const {
  for (std::size_t e = 0; e < ids_.size(); ++e) {
    if (ids_[e] == id) return e;
  }
  return std::nullopt;
}

CostParams::CostParams(double attack_cost, double defense_cost)
    : attack_(attack_cost), defense_(defense_cost) {
  require(std::isfinite(attack_) && attack_ > 0.0, "attack cost must be positive and finite");
  require(std::isfinite(defense_) && defense_ > 0.0, "defense cost must be positive and finite");
}

CostLadder::CostLadder(const FacilityProfile& profile)
    : partition_(partition_by_cost(profile)), baseline_(profile.baseline_cost()) {
  const std::size_t K = partition_.K();
  gap_.assign(K + 1, 0.0);
  count_.assign(K + 1, 0.0);
  inv_sum_.assign(K + 1, 0.0);
  count_sum_.assign(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    const CostGroup& g = partition_.groups[k - 1];
    gap_[k] = g.cost - baseline_;
    count_[k] = static_cast<double>(g.count());
    inv_sum_[k] = inv_sum_[k - 1] + count_[k] / gap_[k];
    count_sum_[k] = count_sum_[k - 1] + count_[k];
  }
}

std::size_t CostLadder::vulnerable_groups(double attack_cost) const {
  std::size_t i = 0;
  while (i < K() && gap_[i + 1] > attack_cost) ++i;
  return i;
}

EffortVector::EffortVector(std::vector<double> effort) : effort_(std::move(effort)) {
  for (double r : effort_) {
    require(std::isfinite(r) && r >= 0.0 && r <= 1.0, "security effort must lie in [0,1]");
  }
}

double EffortVector::total() const {
  double s = 0.0;
  for (double r : effort_) s += r;
  return s;
}

MixedDefense::MixedDefense(std::map<FacilitySet, double> support) : support_(std::move(support)) {
  double total = 0.0;
  for (const auto& [subset, p] : support_) {
    require(std::isfinite(p) && p >= 0.0, "defense probabilities must be nonnegative");
    require(std::is_sorted(subset.begin(), subset.end()) &&
                std::adjacent_find(subset.begin(), subset.end()) == subset.end(),
            "defended subsets must be sorted and duplicate-free");
    total += p;
  }
  require(std::abs(total - 1.0) <= kSumTolerance, "defense probabilities must sum to 1");
}

AttackDistribution::AttackDistribution(std::vector<double> probs, double no_attack)
    : probs_(std::move(probs)), no_attack_(no_attack) {
  double total = no_attack_;
  require(std::isfinite(no_attack_) && no_attack_ >= 0.0, "no-attack probability must be nonnegative");
  for (double p : probs_) {
    require(std::isfinite(p) && p >= 0.0, "attack probabilities must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= kSumTolerance, "attack probabilities must sum to 1");
}

double AttackDistribution::total_attack() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

FacilityClassification classify_facilities(const FacilityProfile& profile) {
  FacilityClassification out;
  const double c0 = profile.baseline_cost();
  for (std::size_t e = 0; e < profile.size(); ++e) {
    const double ce = profile.post_attack_cost(e);
    if (ce > c0) {
      out.increased.push_back(e);
    } else if (ce == c0) {
      out.unchanged.push_back(e);
    } else {
      out.decreased.push_back(e);
    }
  }
  return out;
}

FacilityPartition partition_by_cost(const FacilityProfile& profile) {
  const FacilitySet increased = classify_facilities(profile).increased;
  if (increased.empty()) {
    throw Error(ErrorKind::EmptyVulnerableUniverse, "no facility increases the usage cost");
  }
  std::vector<double> costs;
  for (FacilityIndex e : increased) costs.push_back(profile.post_attack_cost(e));
  std::sort(costs.begin(), costs.end(), std::greater<>());
  costs.erase(std::unique(costs.begin(), costs.end()), costs.end());

  FacilityPartition out;
  for (double c : costs) {
    CostGroup g{c, {}};
    for (FacilityIndex e : increased) {
      if (profile.post_attack_cost(e) == c) g.members.push_back(e);
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

FacilitySet vulnerable_set(const FacilityProfile& profile, double attack_cost) {
  FacilitySet out;
  const double c0 = profile.baseline_cost();
  for (std::size_t e = 0; e < profile.size(); ++e) {
    const double ce = profile.post_attack_cost(e);
    if (ce > c0 && ce - attack_cost > c0) out.push_back(e);
  }
  return out;
}

FacilitySet vulnerable_set(const FacilityProfile& profile, const CostParams& params) {
  return vulnerable_set(profile, params.attack_cost());
}

EffortVector effort_from_mixed(const MixedDefense& sigma_d, const FacilityProfile& profile) {
  std::vector<double> rho(profile.size(), 0.0);
  for (const auto& [subset, p] : sigma_d.support()) {
    for (FacilityIndex e : subset) {
      require(e < profile.size(), "defended subset references an unknown facility");
      rho[e] += p;
    }
  }
  for (double& r : rho) r = std::clamp(r, 0.0, 1.0);
  return EffortVector(std::move(rho));
}

MixedDefense mixed_from_effort(const EffortVector& rho) {
  std::vector<double> levels;
  for (double r : rho.values()) {
    if (r > 0.0) levels.push_back(r);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::map<FacilitySet, double> support;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    FacilitySet subset;
    for (std::size_t e = 0; e < rho.size(); ++e) {
      if (rho[e] >= levels[i]) subset.push_back(e);
    }
    const double next = (i + 1 < levels.size()) ? levels[i + 1] : 0.0;
    support[subset] = levels[i] - next;
  }
  const double top = levels.empty() ? 0.0 : levels.front();
  if (top < 1.0) support[FacilitySet{}] = 1.0 - top;
  return MixedDefense(std::move(support));
}

Utilities expected_utilities(const EffortVector& rho, const AttackDistribution& sigma_a,
                             const FacilityProfile& profile, const CostParams& params) {
  require(rho.size() == profile.size() && sigma_a.size() == profile.size(),
          "effort and attack vectors must cover every facility");
  const double c0 = profile.baseline_cost();
  double ud = 0.0;
  double ua = 0.0;
  for (std::size_t e = 0; e < profile.size(); ++e) {
    const double ce = profile.post_attack_cost(e);
    const double s = sigma_a[e];
    ud -= rho[e] * ((c0 - ce) * s + params.defense_cost()) + ce * s;
    ua += rho[e] * (c0 - ce) * s + ce * s;
  }
  ud -= c0 * sigma_a.no_attack();
  ua += c0 * sigma_a.no_attack() - params.attack_cost() * sigma_a.total_attack();
  return {ud, ua};
}

Utilities expected_utilities_mixed(const MixedDefense& sigma_d,
                                   const AttackDistribution& sigma_a,
                                   const FacilityProfile& profile,
                                   const CostParams& params) {
  require(sigma_a.size() == profile.size(), "attack vector must cover every facility");
  const double c0 = profile.baseline_cost();
  double usage = 0.0;
  double defended = 0.0;
  for (const auto& [subset, pd] : sigma_d.support()) {
    defended += pd * static_cast<double>(subset.size());
    usage += pd * sigma_a.no_attack() * c0;
    for (std::size_t e = 0; e < profile.size(); ++e) {
      const double cost = contains(subset, e) ? c0 : profile.post_attack_cost(e);
      usage += pd * sigma_a[e] * cost;
    }
  }
  return {-usage - params.defense_cost() * defended,
          usage - params.attack_cost() * sigma_a.total_attack()};
}

Utilities zero_sum_utilities(const EffortVector& rho, const AttackDistribution& sigma_a,
                             const FacilityProfile& profile, const CostParams& params) {
  const Utilities u = expected_utilities(rho, sigma_a, profile, params);
  const double ua0 = u.attacker + params.defense_cost() * rho.total();
  return {-ua0, ua0};
}

}  // namespace secgame::model
