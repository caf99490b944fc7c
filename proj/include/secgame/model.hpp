#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secgame::model {

using FacilityIndex = std::size_t;
/// Facility indices in ascending (declared profile) order.
using FacilitySet = std::vector<FacilityIndex>;

/// Facilities with the pre-attack usage cost and the usage cost observed
/// after each single facility is compromised.
class FacilityProfile {
 public:
  FacilityProfile(std::vector<std::string> ids, double baseline_cost,
                  std::vector<double> post_attack_cost);

  std::size_t size() const { return ids_.size(); }
  std::span<const std::string> ids() const { return ids_; }
  const std::string& id(FacilityIndex e) const { return ids_.at(e); }
  std::optional<FacilityIndex> find(std::string_view id) const;

  double baseline_cost() const { return baseline_; }
  double post_attack_cost(FacilityIndex e) const { return post_.at(e); }
  std::span<const double> post_attack_costs() const { return post_; }

  /// Ce - C0.
  double cost_increase(FacilityIndex e) const { return post_.at(e) - baseline_; }

 private:
  std::vector<std::string> ids_;
  double baseline_;
  std::vector<double> post_;
};

class CostParams {
 public:
  CostParams(double attack_cost, double defense_cost);

  double attack_cost() const { return attack_; }
  double defense_cost() const { return defense_; }

 private:
  double attack_;
  double defense_;
};

struct FacilityClassification {
  FacilitySet increased;  // Ce > C0
  FacilitySet unchanged;  // Ce == C0
  FacilitySet decreased;  // Ce < C0
};

struct CostGroup {
  double cost;  // the shared post-attack cost C(k)
  FacilitySet members;
  std::size_t count() const { return members.size(); }
};

/// Increased-cost facilities grouped by distinct post-attack cost, groups in
/// strictly decreasing cost order.
struct FacilityPartition {
  std::vector<CostGroup> groups;
  std::size_t K() const { return groups.size(); }
};

/// Per-group quantities that every threshold formula is built from. Group
/// indices here are 1-based to match the k = 1..K ladder; slot 0 is unused.
class CostLadder {
 public:
  explicit CostLadder(const FacilityProfile& profile);

  const FacilityPartition& partition() const { return partition_; }
  std::size_t K() const { return partition_.K(); }
  double baseline() const { return baseline_; }

  /// C(k) - C0.
  double gap(std::size_t k) const { return gap_.at(k); }
  /// E(k).
  double count(std::size_t k) const { return count_.at(k); }
  /// sum_{l <= k} E(l) / (C(l) - C0); zero for k = 0.
  double inverse_sum(std::size_t k) const { return inv_sum_.at(k); }
  /// sum_{l <= k} E(l); zero for k = 0.
  double count_sum(std::size_t k) const { return count_sum_.at(k); }
  const CostGroup& group(std::size_t k) const { return partition_.groups.at(k - 1); }

  /// Number i of groups with C(k) - C0 > c_a. Groups 1..i are vulnerable.
  std::size_t vulnerable_groups(double attack_cost) const;
  /// (sum_{l <= k} E(l) / (C(l) - C0))^{-1}: the k-th defense-cost band edge.
  double band_threshold(std::size_t k) const { return 1.0 / inv_sum_.at(k); }

 private:
  FacilityPartition partition_;
  double baseline_;
  std::vector<double> gap_;
  std::vector<double> count_;
  std::vector<double> inv_sum_;
  std::vector<double> count_sum_;
};

/// Probability that each facility is secured.
class EffortVector {
 public:
  EffortVector() = default;
  explicit EffortVector(std::vector<double> effort);
  static EffortVector zeros(std::size_t n) { return EffortVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return effort_.size(); }
  double operator[](FacilityIndex e) const { return effort_.at(e); }
  std::span<const double> values() const { return effort_; }
  double total() const;

  friend bool operator==(const EffortVector&, const EffortVector&) = default;

 private:
  std::vector<double> effort_;
};

/// Defender mixed strategy stored by its support only.
class MixedDefense {
 public:
  explicit MixedDefense(std::map<FacilitySet, double> support);
  const std::map<FacilitySet, double>& support() const { return support_; }

 private:
  std::map<FacilitySet, double> support_;
};

/// Attacker mixed strategy over single facilities plus the no-attack action.
class AttackDistribution {
 public:
  AttackDistribution() = default;
  AttackDistribution(std::vector<double> probs, double no_attack);
  static AttackDistribution no_attack_only(std::size_t n) {
    return AttackDistribution(std::vector<double>(n, 0.0), 1.0);
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](FacilityIndex e) const { return probs_.at(e); }
  std::span<const double> probs() const { return probs_; }
  double no_attack() const { return no_attack_; }
  double total_attack() const;

 private:
  std::vector<double> probs_;
  double no_attack_ = 1.0;
};

struct Utilities {
  double defender;
  double attacker;
};

FacilityClassification classify_facilities(const FacilityProfile& profile);

/// Throws EmptyVulnerableUniverse when no facility increases the usage cost.
FacilityPartition partition_by_cost(const FacilityProfile& profile);

/// {e : Ce - c_a > C0}.
FacilitySet vulnerable_set(const FacilityProfile& profile, const CostParams& params);
FacilitySet vulnerable_set(const FacilityProfile& profile, double attack_cost);

EffortVector effort_from_mixed(const MixedDefense& sigma_d, const FacilityProfile& profile);

/// Nested level-set construction: one subset per distinct positive effort.
MixedDefense mixed_from_effort(const EffortVector& rho);

/// Utilities written in terms of the effort vector.
Utilities expected_utilities(const EffortVector& rho, const AttackDistribution& sigma_a,
                             const FacilityProfile& profile, const CostParams& params);

/// Utilities as an expectation over defended subsets and attacker actions.
Utilities expected_utilities_mixed(const MixedDefense& sigma_d,
                                   const AttackDistribution& sigma_a,
                                   const FacilityProfile& profile,
                                   const CostParams& params);

/// The strategically equivalent zero-sum pair: Ua0 = Ua + c_d * sum(rho).
Utilities zero_sum_utilities(const EffortVector& rho, const AttackDistribution& sigma_a,
                             const FacilityProfile& profile, const CostParams& params);

}  // namespace secgame::model
