#include <algorithm>
#include <cmath>
#include <ostream>

#include "secgame/cli.hpp"
#include "secgame/error.hpp"
#include "secgame/normalform.hpp"
#include "secgame/oracle.hpp"
#include "secgame/sequential.hpp"

namespace secgame::cli {

namespace {

using model::FacilityProfile;

constexpr double kLpMatchTol = 1e-8;

const FacilityProfile& need_profile(const Scenario& sc) {
  if (!sc.profile) throw Error(ErrorKind::InvalidInput, "scenario has no [facilities] or [network] section");
  return *sc.profile;
}

const model::CostParams& need_params(const Scenario& sc) {
  if (!sc.params) throw Error(ErrorKind::InvalidInput, "scenario has no [costs] section");
  return *sc.params;
}

void print_effort(std::ostream& out, const FacilityProfile& profile, const model::EffortVector& rho) {
  out << "effort:\n";
  for (std::size_t e = 0; e < profile.size(); ++e) out << "  " << profile.id(e) << ' ' << fmt(rho[e]) << '\n';
}

void print_attack(std::ostream& out, const char* title, const FacilityProfile& profile,
                  const model::AttackDistribution& sigma) {
  out << title << ":\n";
  for (std::size_t e = 0; e < profile.size(); ++e) out << "  " << profile.id(e) << ' ' << fmt(sigma[e]) << '\n';
  out << "  none " << fmt(sigma.no_attack()) << '\n';
}

bool nothing_vulnerable(const FacilityProfile& profile, const model::CostParams& params) {
  return model::vulnerable_set(profile, params).empty();
}

// Attacker LP solved by the simplex oracle; prints the value and strategy.
bool lp_fallback(std::ostream& out, const FacilityProfile& profile, const model::CostParams& params) {
  const normalform::LinearProgram lp = normalform::build_attacker_lp(profile, params);
  const oracle::LpSolution sol = oracle::simplex_solve(lp);
  out << "lp status: " << oracle::to_string(sol.status) << '\n';
  if (sol.status != oracle::LpStatus::Optimal) return false;
  out << "lp value: " << fmt(sol.optimal_value) << '\n';
  out << "lp attack:\n";
  for (std::size_t v = 0; v < lp.num_variables(); ++v) {
    if (lp.labels[v].rfind("sigma(", 0) == 0) out << "  " << lp.labels[v] << ' ' << fmt(sol.assignment[v]) << '\n';
  }
  return true;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::BoundaryParameters: return kBoundary;
      case ErrorKind::InternalInconsistency: return kInternal;
      default: return kInputError;
    }
  }
  return kInternal;
}

int cmd_solve_ne(const Scenario& sc, std::ostream& out, std::ostream& err) {
  const FacilityProfile& profile = need_profile(sc);
  const model::CostParams& params = need_params(sc);
  const normalform::NeRegimeLabel label = normalform::classify_regime_ne(profile, params);
  if (label.kind == normalform::NeRegimeLabel::Kind::Boundary) {
    out << "regime: boundary (" << label.note << ")\n";
    err << "closed form declines on a regime boundary; reporting the attacker LP\n";
    return lp_fallback(out, profile, params) ? kBoundary : kInternal;
  }
  const auto eq = normalform::solve_ne(profile, params);
  out << "regime: " << eq.regime.to_string() << '\n';
  if (nothing_vulnerable(profile, params)) out << "no vulnerable facilities; no attack\n";
  print_effort(out, profile, eq.effort);
  print_attack(out, "attack", profile, eq.canonical_attack);
  out << "ud: " << fmt(eq.defender_utility) << '\n';
  out << "ua: " << fmt(eq.attacker_utility) << '\n';
  return kOk;
}

int cmd_solve_spe(const Scenario& sc, std::ostream& out, std::ostream& err, double grid_step) {
  const FacilityProfile& profile = need_profile(sc);
  const model::CostParams& params = need_params(sc);
  const sequential::SpeRegimeLabel label = sequential::classify_regime_spe(profile, params);
  if (label.kind == sequential::SpeRegimeLabel::Kind::Boundary) {
    out << "regime: boundary (" << label.note << ")\n";
    err << "closed form declines on a regime boundary; reporting the effort grid optimum\n";
    const oracle::GridOptimum g = oracle::spe_grid_optimum(profile, params, grid_step);
    out << "grid step: " << fmt(grid_step) << '\n';
    print_effort(out, profile, g.effort);
    out << "ud: " << fmt(g.utility) << '\n';
    return kBoundary;
  }
  const auto spe = sequential::solve_spe(profile, params);
  out << "regime: " << spe.regime.to_string() << '\n';
  if (nothing_vulnerable(profile, params)) out << "no vulnerable facilities; no attack\n";
  print_effort(out, profile, spe.effort);
  out << "deterred: " << (spe.on_path.deterred ? "yes" : "no") << '\n';
  if (!spe.on_path.deterred) {
    out << "attack support:";
    for (auto e : spe.on_path.support) out << ' ' << profile.id(e);
    out << '\n';
    print_attack(out, "witness", profile, spe.on_path.witness);
  }
  out << "ud: " << fmt(spe.defender_utility) << '\n';
  out << "ua: " << fmt(spe.attacker_utility) << '\n';
  return kOk;
}

int cmd_regimes(const Scenario& sc, const std::optional<std::string>& grid, std::ostream& out,
                std::ostream&) {
  const FacilityProfile& profile = need_profile(sc);
  analysis::AxisRange ca;
  analysis::AxisRange cd;
  if (grid) {
    std::tie(ca, cd) = parse_grid(*grid);
  } else {
    if (model::classify_facilities(profile).increased.empty()) {
      throw Error(ErrorKind::InvalidInput, "no facility increases the usage cost; pass --grid explicitly");
    }
    const double top = 4.0 / 3.0 * model::CostLadder(profile).gap(1);
    ca = {0.0, top, 200};
    cd = {0.0, top, 200};
  }
  analysis::write_sweep_csv(out, analysis::regime_sweep(profile, ca, cd));
  return kOk;
}

int cmd_compare(const Scenario& sc, std::ostream& out, std::ostream&) {
  const FacilityProfile& profile = need_profile(sc);
  const model::CostParams& params = need_params(sc);
  const analysis::CostRegion region = analysis::classify_cost_region(profile, params);
  if (region == analysis::CostRegion::Boundary) {
    out << "region: Boundary\n";
    return kBoundary;
  }
  const analysis::GameComparison cmp = analysis::compare_games(profile, params);
  out << "region: " << analysis::to_string(cmp.region) << ", gap: " << fmt(cmp.utility_gap) << '\n';
  out << "first mover advantage: " << (cmp.first_mover_advantage ? "yes" : "no") << '\n';
  out << "ud: " << fmt(cmp.ne.defender_utility) << '\n';
  out << "uds: " << fmt(cmp.spe.defender_utility) << '\n';
  out << "ua: " << fmt(cmp.ne.attacker_utility) << '\n';
  out << "uas: " << fmt(cmp.spe.attacker_utility) << '\n';
  return kOk;
}

int cmd_verify(const Scenario& sc, const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  const FacilityProfile& profile = need_profile(sc);
  const model::CostParams& params = need_params(sc);
  if (model::classify_facilities(profile).increased.empty()) {
    out << "no facility increases the usage cost; nothing to verify\n";
    out << "all checks passed\n";
    return kOk;
  }
  const normalform::NeRegimeLabel ne_label = normalform::classify_regime_ne(profile, params);
  if (ne_label.kind == normalform::NeRegimeLabel::Kind::Boundary) {
    out << "boundary parameters (" << ne_label.note << "); LP-only mode\n";
    return lp_fallback(out, profile, params) ? kBoundary : kInternal;
  }

  bool ok = true;
  auto eq = normalform::solve_ne(profile, params);
  if (opts.perturb != 0.0) {
    // Nudge the vulnerable facility with the lowest post-attack cost.
    const auto vuln = model::vulnerable_set(profile, params);
    if (!vuln.empty()) {
      const auto target = *std::min_element(vuln.begin(), vuln.end(), [&](auto a, auto b) {
        return profile.post_attack_cost(a) < profile.post_attack_cost(b);
      });
      std::vector<double> rho(eq.effort.values().begin(), eq.effort.values().end());
      rho[target] = std::clamp(rho[target] + opts.perturb, 0.0, 1.0);
      eq.effort = model::EffortVector(std::move(rho));
    }
    err << "perturbation " << fmt(opts.perturb) << " injected\n";
  }

  const normalform::LinearProgram lp = normalform::build_attacker_lp(profile, params);
  const oracle::LpSolution sol = oracle::simplex_solve(lp);
  const double zero_sum = model::zero_sum_utilities(eq.effort, eq.canonical_attack, profile, params).attacker;
  if (sol.status != oracle::LpStatus::Optimal) {
    out << "lp: " << oracle::to_string(sol.status) << ", FAIL\n";
    ok = false;
  } else {
    const bool match = std::abs(sol.optimal_value - zero_sum) <= kLpMatchTol;
    out << "lp value: " << fmt(sol.optimal_value) << ", closed form: " << fmt(zero_sum) << ", "
        << (match ? "ok" : "FAIL") << '\n';
    const std::vector<double> x = oracle::attacker_lp_point(eq.canonical_attack, profile, params);
    const double viol = oracle::lp_violation(lp, x);
    const double shortfall = sol.optimal_value - oracle::lp_objective(lp, x);
    const bool attack_ok = viol <= kLpMatchTol && shortfall <= kLpMatchTol;
    out << "attack in lp: violation " << fmt(viol) << ", shortfall " << fmt(shortfall) << ", "
        << (attack_ok ? "ok" : "FAIL") << '\n';
    ok = ok && match && attack_ok;
  }

  const oracle::NeReport ne = oracle::verify_ne(eq, profile, params, opts.eps);
  out << "ne check: " << (ne.passed ? "pass" : "FAIL") << " (worst violation " << fmt(ne.worst_violation)
      << ")\n";
  if (!ne.passed) out << "  " << ne.detail << '\n';
  ok = ok && ne.passed;

  int code = kOk;
  const sequential::SpeRegimeLabel spe_label = sequential::classify_regime_spe(profile, params);
  if (spe_label.kind == sequential::SpeRegimeLabel::Kind::Boundary) {
    out << "spe check: skipped (boundary: " << spe_label.note << ")\n";
    code = kBoundary;
  } else if (model::vulnerable_set(profile, params).size() > oracle::kMaxGridVulnerable) {
    out << "spe check: skipped (more than " << oracle::kMaxGridVulnerable << " vulnerable facilities)\n";
  } else {
    auto spe = sequential::solve_spe(profile, params);
    spe.defender_utility += opts.perturb;
    const oracle::SpeReport rep = oracle::verify_spe(spe, profile, params, opts.grid_step, opts.eps);
    out << "spe check: " << (rep.passed ? "pass" : "FAIL") << " (claimed " << fmt(rep.claimed_utility)
        << ", grid best " << fmt(rep.grid_best) << ", allowance " << fmt(rep.allowance) << ")\n";
    if (!rep.passed) out << "  " << rep.detail << '\n';
    ok = ok && rep.passed;
  }

  if (!ok) {
    out << "verification failed\n";
    return kInternal;
  }
  out << "all checks passed\n";
  return code;
}

int cmd_simulate(const Scenario& sc, const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  if (!sc.network || !sc.learning) {
    throw Error(ErrorKind::InvalidInput, "simulate needs [network] and [learning] sections");
  }
  const routing::RoutedNetwork& net = *sc.network;
  const LearningSection& ls = *sc.learning;
  const std::size_t n = net.edges().size();

  learning::SimulationConfig cfg;
  cfg.noise_half_width = ls.noise;
  cfg.horizon = opts.horizon.value_or(ls.horizon);
  cfg.seed = opts.seed.value_or(ls.seed);
  cfg.prior = ls.prior ? learning::Belief(*ls.prior)
                       : learning::Belief(std::vector<double>(n + 1, 1.0 / static_cast<double>(n + 1)));

  if (ls.state == "ne" || ls.state == "spe") {
    const FacilityProfile& profile = need_profile(sc);
    const model::CostParams& params = need_params(sc);
    bool aligned = profile.size() == n;
    for (std::size_t e = 0; aligned && e < n; ++e) aligned = profile.id(e) == net.edges()[e].id;
    if (!aligned) throw Error(ErrorKind::InvalidInput, "facilities must be the network edges, in order");
    cfg.states = ls.state == "ne" ? learning::state_distribution(normalform::solve_ne(profile, params))
                                  : learning::state_distribution(sequential::solve_spe(profile, params));
  } else {
    const learning::State s = ls.state == "empty" ? n : *net.find_edge(ls.state);
    std::vector<double> p(n + 1, 0.0);
    p[s] = 1.0;
    cfg.states = learning::StateDistribution(std::move(p));
    cfg.fixed_state = s;
  }

  const learning::LearningTrace trace = learning::run_simulation(cfg, net);
  learning::write_trace_csv(out, trace, net);
  const auto degenerate = std::count_if(trace.stages.begin(), trace.stages.end(),
                                        [](const learning::StageRecord& r) { return r.degenerate; });
  if (degenerate > 0) {
    err << degenerate << " stage(s) ruled out every state; belief kept unchanged there\n";
    return kBoundary;
  }
  return kOk;
}

}  // namespace secgame::cli
