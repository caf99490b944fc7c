#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "secgame/linear_program.hpp"
#include "secgame/model.hpp"
#include "secgame/normalform.hpp"
#include "secgame/sequential.hpp"

namespace secgame::oracle {

using model::CostParams;
using model::EffortVector;
using model::FacilityIndex;
using model::FacilityProfile;
using normalform::LinearProgram;

// ---------------------------------------------------------------- simplex

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double optimal_value = 0.0;
  /// One entry per LP variable; empty unless Optimal.
  std::vector<double> assignment;
};

/// maximize c.x + offset  s.t.  A x = b, x >= 0, b >= 0.
/// Original variable v equals shift + x[pos] - x[neg] (neg only for free variables,
/// pos_sign = -1 for variables bounded above only).
struct StandardForm {
  struct VarMap {
    double shift = 0.0;
    std::size_t pos = 0;
    double pos_sign = 1.0;
    std::optional<std::size_t> neg;
  };
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c;
  double offset = 0.0;
  std::vector<VarMap> vars;

  std::vector<double> recover(const std::vector<double>& x) const;
};

StandardForm to_standard_form(const LinearProgram& lp);

struct SimplexReport {
  LpSolution solution;
  StandardForm form;
  /// Rows of `form` that survived redundancy removal after phase one.
  std::vector<std::size_t> rows;
  /// basis[r] is the column basic in surviving row rows[r].
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

inline constexpr double kSimplexTol = 1e-9;
inline constexpr std::size_t kSimplexPivotLimit = 1'000'000;

/// Two-phase dense tableau simplex with Bland's rule.
SimplexReport simplex_solve_detailed(const LinearProgram& lp,
                                     std::size_t pivot_limit = kSimplexPivotLimit);
LpSolution simplex_solve(const LinearProgram& lp);

/// Largest violation of any row or bound of `lp` at x (0 when feasible).
double lp_violation(const LinearProgram& lp, const std::vector<double>& x);
double lp_objective(const LinearProgram& lp, const std::vector<double>& x);

/// The point of build_attacker_lp given by sigma_a with each v_e at its
/// largest feasible value.
std::vector<double> attacker_lp_point(const model::AttackDistribution& sigma_a,
                                      const FacilityProfile& profile, const CostParams& params);

// ------------------------------------------------------- best responses

struct AttackerBestResponse {
  double utility = 0.0;
  /// Maximising facilities, ascending.
  std::vector<FacilityIndex> facilities;
  bool no_attack = false;
};

/// Enumerates Ua(rho, e) over e with Ce > C0 together with Ua(rho, none) = C0.
AttackerBestResponse attacker_best_response_enum(const EffortVector& rho,
                                                 const FacilityProfile& profile,
                                                 const CostParams& params);

// ------------------------------------------------------------ verifiers

struct NeReport {
  bool passed = false;
  bool attacker_ok = false;
  bool defender_ok = false;
  double worst_violation = 0.0;
  std::string detail;
};

NeReport verify_ne(const normalform::NormalFormEquilibrium& candidate,
                   const FacilityProfile& profile, const CostParams& params, double eps);

/// Defender utility of committing to rho when the attacker answers with the
/// response least favourable to the defender (no attack when every vulnerable
/// facility is at or above threshold).
double spe_defender_utility(const EffortVector& rho, const FacilityProfile& profile,
                            const CostParams& params);

struct GridOptimum {
  double utility = 0.0;
  EffortVector effort;
  std::size_t candidates = 0;
};

inline constexpr std::size_t kMaxGridVulnerable = 6;

/// Best defender utility over the effort grid {0, h, 2h, ...} U {threshold}
/// on every vulnerable facility (zero elsewhere). Exact over the grid: each
/// attack level L only needs the cheapest grid point whose usage costs stay
/// below L. Throws TooManyVulnerable above kMaxGridVulnerable.
GridOptimum spe_grid_optimum(const FacilityProfile& profile, const CostParams& params,
                             double grid_step);
/// Single-threaded reference for spe_grid_optimum; identical results.
GridOptimum spe_grid_optimum_serial(const FacilityProfile& profile, const CostParams& params,
                                    double grid_step);
/// Visits every grid point. Only for coarse steps.
GridOptimum spe_grid_optimum_exhaustive(const FacilityProfile& profile, const CostParams& params,
                                        double grid_step);

struct SpeReport {
  bool passed = false;
  double claimed_utility = 0.0;
  double achieved_utility = 0.0;
  double grid_best = 0.0;
  double allowance = 0.0;
  EffortVector grid_best_effort;
  std::string detail;
};

/// Passes iff the candidate's claimed utility is what its effort actually
/// earns and no grid point beats it by more than eps + c_d |E| grid_step.
SpeReport verify_spe(const sequential::SpeOutcome& candidate, const FacilityProfile& profile,
                     const CostParams& params, double grid_step, double eps);

}  // namespace secgame::oracle
