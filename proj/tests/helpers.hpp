#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "secgame/model.hpp"
#include "secgame/normalform.hpp"
#include "secgame/sequential.hpp"

namespace testing {

using secgame::model::CostParams;
using secgame::model::FacilityProfile;

inline FacilityProfile three_facility() {
  return FacilityProfile({"e1", "e2", "e3"}, 17.0, {20.0, 19.0, 18.0});
}

inline FacilityProfile profile_of(double c0, std::vector<double> costs) {
  std::vector<std::string> ids;
  for (std::size_t e = 0; e < costs.size(); ++e) ids.push_back("e" + std::to_string(e + 1));
  return FacilityProfile(std::move(ids), c0, std::move(costs));
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// True when x is within rel of y (relative to max(1, |y|)).
inline bool within(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(1.0, std::abs(y));
}

struct Instance {
  FacilityProfile profile;
  CostParams params;
};

// Keeps (c_a, c_d) at least `margin` (relative) away from every regime edge of
// both games.
inline bool far_from_boundaries(const FacilityProfile& profile, const CostParams& params, double margin) {
  using secgame::model::classify_facilities;
  using secgame::model::CostLadder;
  if (classify_facilities(profile).increased.empty()) return true;
  const CostLadder ladder(profile);
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  for (std::size_t k = 1; k <= ladder.K(); ++k) {
    if (within(ca, ladder.gap(k), margin)) return false;
  }
  const std::size_t i = ladder.vulnerable_groups(ca);
  for (std::size_t j = 1; j <= i; ++j) {
    if (within(cd, ladder.band_threshold(j), margin)) return false;
  }
  if (i > 0 && within(cd, secgame::sequential::cd_threshold_tilde(ladder, ca), margin)) return false;
  return true;
}

// |E| in [1, 6], C0 in [1, 50], Ce in [C0 - 5, C0 + 20], c_a and c_d in (0, 25].
// At least one facility raises the usage cost.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  Instance next(std::size_t max_vulnerable = 6, std::size_t min_vulnerable = 0) {
    std::uniform_int_distribution<std::size_t> count(1, 6);
    std::uniform_real_distribution<double> base(1.0, 50.0);
    std::uniform_real_distribution<double> shift(-5.0, 20.0);
    std::uniform_real_distribution<double> cost(0.0, 25.0);
    while (true) {
      const std::size_t n = count(rng_);
      const double c0 = base(rng_);
      std::vector<double> post;
      for (std::size_t e = 0; e < n; ++e) post.push_back(c0 + shift(rng_));
      FacilityProfile profile = profile_of(c0, post);
      if (secgame::model::classify_facilities(profile).increased.empty()) continue;
      double ca = cost(rng_);
      double cd = cost(rng_);
      if (ca == 0.0 || cd == 0.0) continue;
      CostParams params(ca, cd);
      const std::size_t v = secgame::model::vulnerable_set(profile, params).size();
      if (v > max_vulnerable || v < min_vulnerable) continue;
      if (!far_from_boundaries(profile, params, 1e-6)) continue;
      return {std::move(profile), params};
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
