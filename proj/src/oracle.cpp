#include "secgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secgame/error.hpp"

namespace secgame::oracle {

namespace {

constexpr double kTieTol = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

// Shared evaluation of the defender utility under the pessimal attacker
// response, so every grid search agrees bit for bit with spe_defender_utility.
class SpeEvaluator {
 public:
  SpeEvaluator(const FacilityProfile& profile, const CostParams& params)
      : profile_(profile),
        c0_(profile.baseline_cost()),
        cd_(params.defense_cost()),
        vulnerable_(model::vulnerable_set(profile, params)) {
    for (FacilityIndex e : vulnerable_) {
      thresholds_.push_back(sequential::threshold_effort(profile, params.attack_cost(), e));
    }
  }

  const model::FacilitySet& vulnerable() const { return vulnerable_; }
  double threshold(std::size_t v) const { return thresholds_[v]; }
  double usage(FacilityIndex e, double rho) const {
    return rho * c0_ + (1.0 - rho) * profile_.post_attack_cost(e);
  }

  double operator()(std::span<const double> rho) const {
    double total = 0.0;
    for (double r : rho) total += r;
    bool deterred = true;
    double worst = -INFINITY;
    for (std::size_t v = 0; v < vulnerable_.size(); ++v) {
      const FacilityIndex e = vulnerable_[v];
      if (rho[e] < thresholds_[v] - kTieTol) deterred = false;
      worst = std::max(worst, usage(e, rho[e]));
    }
    if (deterred) return -c0_ - cd_ * total;
    return -worst - cd_ * total;
  }

 private:
  const FacilityProfile& profile_;
  double c0_;
  double cd_;
  model::FacilitySet vulnerable_;
  std::vector<double> thresholds_;
};

// Per vulnerable facility: grid values ascending (multiples of h strictly
// below threshold, then the threshold) and their usage costs (descending).
struct EffortGrid {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> usage;
  std::vector<double> levels;
};

EffortGrid build_grid(const SpeEvaluator& eval, double h) {
  if (!(h > 0.0 && h <= 1.0)) throw Error(ErrorKind::InvalidInput, "grid step must lie in (0, 1]");
  if (eval.vulnerable().size() > kMaxGridVulnerable) {
    throw Error(ErrorKind::TooManyVulnerable,
                std::to_string(eval.vulnerable().size()) + " vulnerable facilities exceed the limit of " +
                    std::to_string(kMaxGridVulnerable));
  }
  EffortGrid g;
  for (std::size_t v = 0; v < eval.vulnerable().size(); ++v) {
    const double top = eval.threshold(v);
    std::vector<double> vals;
    for (std::size_t k = 0;; ++k) {
      const double x = static_cast<double>(k) * h;
      if (!(x < top - kTieTol)) break;
      vals.push_back(x);
    }
    vals.push_back(top);
    std::vector<double> use;
    use.reserve(vals.size());
    for (double x : vals) use.push_back(eval.usage(eval.vulnerable()[v], x));
    g.levels.insert(g.levels.end(), use.begin(), use.end());
    g.values.push_back(std::move(vals));
    g.usage.push_back(std::move(use));
  }
  std::sort(g.levels.begin(), g.levels.end());
  g.levels.erase(std::unique(g.levels.begin(), g.levels.end()), g.levels.end());
  return g;
}

// Cheapest grid point whose usage cost is at most `level` on every vulnerable
// facility. False when some facility cannot get that low.
bool cheapest_below(const EffortGrid& g, const SpeEvaluator& eval, double level,
                    std::vector<double>& rho) {
  for (std::size_t v = 0; v < g.values.size(); ++v) {
    const auto& use = g.usage[v];
    const auto it = std::partition_point(use.begin(), use.end(),
                                         [level](double u) { return u > level; });
    if (it == use.end()) return false;
    rho[eval.vulnerable()[v]] = g.values[v][static_cast<std::size_t>(it - use.begin())];
  }
  return true;
}

std::vector<double> threshold_point(const EffortGrid& g, const SpeEvaluator& eval, std::size_t n) {
  std::vector<double> rho(n, 0.0);
  for (std::size_t v = 0; v < g.values.size(); ++v) rho[eval.vulnerable()[v]] = g.values[v].back();
  return rho;
}

struct Best {
  double utility = -INFINITY;
  std::size_t index = 0;
  void offer(double u, std::size_t i) {
    if (u > utility || (u == utility && i < index)) {
      utility = u;
      index = i;
    }
  }
};

// Candidate 0 is the all-threshold point; candidate k >= 1 is the cheapest
// point below level k-1.
GridOptimum finish(const EffortGrid& g, const SpeEvaluator& eval, std::size_t n, const Best& best) {
  GridOptimum out;
  out.utility = best.utility;
  std::vector<double> rho = threshold_point(g, eval, n);
  if (best.index > 0) {
    rho.assign(n, 0.0);
    cheapest_below(g, eval, g.levels[best.index - 1], rho);
  }
  out.effort = EffortVector(std::move(rho));
  return out;
}

GridOptimum grid_optimum(const FacilityProfile& profile, const CostParams& params, double h,
                         bool parallel) {
  const SpeEvaluator eval(profile, params);
  const EffortGrid g = build_grid(eval, h);
  const std::size_t n = profile.size();
  const std::size_t levels = g.levels.size();

  Best best;
  best.offer(eval(threshold_point(g, eval, n)), 0);
  std::size_t evaluated = 1;

  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel
    {
      Best local;
      std::size_t count = 0;
      std::vector<double> rho(n, 0.0);
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(levels); ++k) {
        if (!cheapest_below(g, eval, g.levels[static_cast<std::size_t>(k)], rho)) continue;
        local.offer(eval(rho), static_cast<std::size_t>(k) + 1);
        ++count;
      }
#pragma omp critical
      {
        best.offer(local.utility, local.index);
        evaluated += count;
      }
    }
    GridOptimum out = finish(g, eval, n, best);
    out.candidates = evaluated;
    return out;
#endif
  }
  std::vector<double> rho(n, 0.0);
  for (std::size_t k = 0; k < levels; ++k) {
    if (!cheapest_below(g, eval, g.levels[k], rho)) continue;
    best.offer(eval(rho), k + 1);
    ++evaluated;
  }
  GridOptimum out = finish(g, eval, n, best);
  out.candidates = evaluated;
  return out;
}

}  // namespace

AttackerBestResponse attacker_best_response_enum(const EffortVector& rho,
                                                 const FacilityProfile& profile,
                                                 const CostParams& params) {
  if (rho.size() != profile.size()) {
    throw Error(ErrorKind::InvalidInput, "effort vector must cover every facility");
  }
  const model::FacilitySet targets = model::classify_facilities(profile).increased;
  const double c0 = profile.baseline_cost();
  const double ca = params.attack_cost();
  auto value = [&](FacilityIndex e) {
    return rho[e] * c0 + (1.0 - rho[e]) * profile.post_attack_cost(e) - ca;
  };
  AttackerBestResponse out;
  out.utility = c0;
  for (FacilityIndex e : targets) out.utility = std::max(out.utility, value(e));
  for (FacilityIndex e : targets) {
    if (value(e) >= out.utility - kTieTol) out.facilities.push_back(e);
  }
  out.no_attack = c0 >= out.utility - kTieTol;
  return out;
}

NeReport verify_ne(const normalform::NormalFormEquilibrium& candidate,
                   const FacilityProfile& profile, const CostParams& params, double eps) {
  const EffortVector& rho = candidate.effort;
  const model::AttackDistribution& sigma = candidate.canonical_attack;
  if (rho.size() != profile.size() || sigma.size() != profile.size()) {
    throw Error(ErrorKind::InvalidInput, "candidate does not match the facility profile");
  }
  const double c0 = profile.baseline_cost();
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  const double best = attacker_best_response_enum(rho, profile, params).utility;

  NeReport rep;
  double attacker_worst = 0.0;
  std::string attacker_note;
  auto attacker_gap = [&](double gap, const std::string& action) {
    if (gap > attacker_worst) {
      attacker_worst = gap;
      attacker_note = "attacker: '" + action + "' falls short of the best response by " + fmt(gap);
    }
  };
  for (FacilityIndex e = 0; e < profile.size(); ++e) {
    if (sigma[e] <= 0.0) continue;
    const double u = rho[e] * c0 + (1.0 - rho[e]) * profile.post_attack_cost(e) - ca;
    attacker_gap(best - u, profile.id(e));
  }
  if (sigma.no_attack() > 0.0) attacker_gap(best - c0, "no attack");

  double defender_worst = 0.0;
  std::string defender_note;
  for (FacilityIndex e = 0; e < profile.size(); ++e) {
    // Marginal cost to the defender of securing e.
    const double kappa = (c0 - profile.post_attack_cost(e)) * sigma[e] + cd;
    double gap = 0.0;
    if (rho[e] == 0.0) {
      gap = -kappa;
    } else if (rho[e] == 1.0) {
      gap = kappa;
    } else {
      gap = std::abs(kappa);
    }
    if (gap > defender_worst) {
      defender_worst = gap;
      defender_note = "defender: effort " + fmt(rho[e]) + " on '" + profile.id(e) +
                      "' is not a best response (marginal cost " + fmt(kappa) + ")";
    }
  }

  rep.attacker_ok = attacker_worst <= eps;
  rep.defender_ok = defender_worst <= eps;
  rep.passed = rep.attacker_ok && rep.defender_ok;
  rep.worst_violation = std::max(attacker_worst, defender_worst);
  if (!rep.attacker_ok) {
    rep.detail = attacker_note;
  } else if (!rep.defender_ok) {
    rep.detail = defender_note;
  }
  return rep;
}

double spe_defender_utility(const EffortVector& rho, const FacilityProfile& profile,
                            const CostParams& params) {
  if (rho.size() != profile.size()) {
    throw Error(ErrorKind::InvalidInput, "effort vector must cover every facility");
  }
  return SpeEvaluator(profile, params)(rho.values());
}

GridOptimum spe_grid_optimum(const FacilityProfile& profile, const CostParams& params,
                             double grid_step) {
  return grid_optimum(profile, params, grid_step, true);
}

GridOptimum spe_grid_optimum_serial(const FacilityProfile& profile, const CostParams& params,
                                    double grid_step) {
  return grid_optimum(profile, params, grid_step, false);
}

GridOptimum spe_grid_optimum_exhaustive(const FacilityProfile& profile, const CostParams& params,
                                        double grid_step) {
  const SpeEvaluator eval(profile, params);
  const EffortGrid g = build_grid(eval, grid_step);
  const std::size_t n = profile.size();
  const std::size_t m = g.values.size();

  std::vector<std::size_t> idx(m, 0);
  std::vector<double> rho(n, 0.0);
  GridOptimum out;
  out.utility = -INFINITY;
  while (true) {
    for (std::size_t v = 0; v < m; ++v) rho[eval.vulnerable()[v]] = g.values[v][idx[v]];
    const double u = eval(rho);
    ++out.candidates;
    if (u > out.utility) {
      out.utility = u;
      out.effort = EffortVector(rho);
    }
    std::size_t v = 0;
    while (v < m && ++idx[v] == g.values[v].size()) idx[v++] = 0;
    if (v == m) break;
  }
  return out;
}

SpeReport verify_spe(const sequential::SpeOutcome& candidate, const FacilityProfile& profile,
                     const CostParams& params, double grid_step, double eps) {
  SpeReport rep;
  const GridOptimum grid = spe_grid_optimum(profile, params, grid_step);
  rep.claimed_utility = candidate.defender_utility;
  rep.achieved_utility = spe_defender_utility(candidate.effort, profile, params);
  rep.grid_best = grid.utility;
  rep.grid_best_effort = grid.effort;
  rep.allowance =
      eps + params.defense_cost() * static_cast<double>(profile.size()) * grid_step;

  const double consistency = std::max(eps, 1e-9 * std::max(1.0, std::abs(rep.claimed_utility)));
  const bool consistent = std::abs(rep.achieved_utility - rep.claimed_utility) <= consistency;
  const bool optimal = rep.grid_best <= rep.claimed_utility + rep.allowance;
  rep.passed = consistent && optimal;
  if (!consistent) {
    rep.detail = "claimed defender utility " + fmt(rep.claimed_utility) +
                 " differs from the utility its effort earns, " + fmt(rep.achieved_utility);
  } else if (!optimal) {
    rep.detail = "grid point reaches " + fmt(rep.grid_best) + ", above the claimed " +
                 fmt(rep.claimed_utility) + " plus allowance " + fmt(rep.allowance);
  }
  return rep;
}

}  // namespace secgame::oracle
