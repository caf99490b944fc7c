#include "secgame/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <exception>

#include "secgame/error.hpp"

namespace secgame::analysis {

namespace {

using normalform::near_boundary;

constexpr double kUtilityTol = 1e-9;

bool same(double a, double b) { return std::abs(a - b) <= kUtilityTol * std::max(1.0, std::abs(a)); }

void require(bool ok, CostRegion region, const std::string& what) {
  if (!ok) {
    throw Error(ErrorKind::InternalInconsistency,
                "region " + to_string(region) + " relation violated: " + what);
  }
}

void validate_axis(const AxisRange& r, const char* name) {
  if (!(r.lo >= 0.0 && r.hi > r.lo && std::isfinite(r.hi)) || r.steps < 2) {
    throw Error(ErrorKind::InvalidInput,
                std::string(name) + " range needs 0 <= lo < hi and at least 2 steps");
  }
}

void put(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  os << buf;
}

void put(std::ostream& os, const std::optional<double>& x) {
  if (x) put(os, *x);
}

std::vector<SweepRow> sweep(const FacilityProfile& profile, const AxisRange& ca,
                            const AxisRange& cd, bool parallel) {
  validate_axis(ca, "attack cost");
  validate_axis(cd, "defense cost");
  const std::size_t total = ca.steps * cd.steps;
  std::vector<SweepRow> rows(total);
  std::vector<std::exception_ptr> errors(total);
  auto cell = [&](std::size_t idx) {
    try {
      rows[idx] = sweep_cell(profile, ca.at(idx / cd.steps), cd.at(idx % cd.steps));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };
  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
      cell(static_cast<std::size_t>(idx));
    }
#else
    for (std::size_t idx = 0; idx < total; ++idx) cell(idx);
#endif
  } else {
    for (std::size_t idx = 0; idx < total; ++idx) cell(idx);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace

std::string to_string(CostRegion region) {
  switch (region) {
    case CostRegion::L: return "L";
    case CostRegion::M: return "M";
    case CostRegion::H: return "H";
    case CostRegion::Boundary: return "Boundary";
    case CostRegion::NoVulnerable: return "NoVulnerable";
  }
  return "?";
}

CostRegion classify_cost_region(const FacilityProfile& profile, const CostParams& params) {
  if (model::classify_facilities(profile).increased.empty()) return CostRegion::NoVulnerable;
  const model::CostLadder ladder(profile);
  const double ca = params.attack_cost();
  const double cd = params.defense_cost();
  for (std::size_t k = 1; k <= ladder.K(); ++k) {
    if (near_boundary(ca, ladder.gap(k))) return CostRegion::Boundary;
  }
  const std::size_t i = ladder.vulnerable_groups(ca);
  if (i == 0) return CostRegion::NoVulnerable;
  const double bar = ladder.band_threshold(i);
  const double tilde = sequential::cd_threshold_tilde(ladder, ca);
  if (near_boundary(cd, bar) || near_boundary(cd, tilde)) return CostRegion::Boundary;
  if (cd < bar) return CostRegion::L;
  if (cd < tilde) return CostRegion::M;
  return CostRegion::H;
}

GameComparison compare_games(const FacilityProfile& profile, const CostParams& params) {
  GameComparison out;
  out.region = classify_cost_region(profile, params);
  if (out.region == CostRegion::Boundary) {
    throw Error(ErrorKind::BoundaryParameters, "cost parameters lie on a region boundary");
  }
  out.ne = normalform::solve_ne(profile, params);
  out.spe = sequential::solve_spe(profile, params);
  out.utility_gap = out.spe.defender_utility - out.ne.defender_utility;

  const double ud = out.ne.defender_utility;
  const double uds = out.spe.defender_utility;
  const double ua = out.ne.attacker_utility;
  const double uas = out.spe.attacker_utility;
  const CostRegion r = out.region;
  switch (r) {
    case CostRegion::L:
      require(out.ne.effort == out.spe.effort, r, "efforts differ");
      require(same(ua, uas), r, "attacker utilities differ");
      require(uds > ud && !same(uds, ud), r, "no defender gain");
      break;
    case CostRegion::M: {
      for (model::FacilityIndex e : model::vulnerable_set(profile, params)) {
        require(out.spe.effort[e] > out.ne.effort[e], r, "sequential effort not higher on " + profile.id(e));
      }
      require(ua > uas && !same(ua, uas), r, "attacker does not lose");
      require(uds > ud && !same(uds, ud), r, "no defender gain");
      break;
    }
    case CostRegion::H:
    case CostRegion::NoVulnerable:
      require(out.ne.effort == out.spe.effort, r, "efforts differ");
      require(same(ua, uas), r, "attacker utilities differ");
      require(same(ud, uds), r, "defender utilities differ");
      out.utility_gap = 0.0;
      break;
    case CostRegion::Boundary:
      break;
  }
  out.first_mover_advantage = out.utility_gap > 0.0;
  return out;
}

double AxisRange::at(std::size_t k) const {
  return lo + (static_cast<double>(k) + 0.5) * (hi - lo) / static_cast<double>(steps);
}

SweepRow sweep_cell(const FacilityProfile& profile, double ca, double cd) {
  const CostParams params(ca, cd);
  SweepRow row;
  row.ca = ca;
  row.cd = cd;
  row.ne = normalform::classify_regime_ne(profile, params);
  row.spe = sequential::classify_regime_spe(profile, params);
  row.region = classify_cost_region(profile, params);
  if (row.ne.kind != normalform::NeRegimeLabel::Kind::Boundary) {
    const auto ne = normalform::solve_ne(profile, params);
    row.ud = ne.defender_utility;
    row.ua = ne.attacker_utility;
  }
  if (row.spe.kind != sequential::SpeRegimeLabel::Kind::Boundary) {
    const auto spe = sequential::solve_spe(profile, params);
    row.uds = spe.defender_utility;
    row.uas = spe.attacker_utility;
  }
  return row;
}

std::vector<SweepRow> regime_sweep(const FacilityProfile& profile, const AxisRange& ca,
                                   const AxisRange& cd) {
  return sweep(profile, ca, cd, true);
}

std::vector<SweepRow> regime_sweep_serial(const FacilityProfile& profile, const AxisRange& ca,
                                          const AxisRange& cd) {
  return sweep(profile, ca, cd, false);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "ca,cd,ne_regime,spe_regime,region,ud,uds,ua,uas\n";
  for (const SweepRow& r : rows) {
    put(os, r.ca);
    os << ',';
    put(os, r.cd);
    os << ',' << r.ne.to_string() << ',' << r.spe.to_string() << ',' << to_string(r.region) << ',';
    put(os, r.ud);
    os << ',';
    put(os, r.uds);
    os << ',';
    put(os, r.ua);
    os << ',';
    put(os, r.uas);
    os << '\n';
  }
}

}  // namespace secgame::analysis
