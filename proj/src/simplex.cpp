#include <algorithm>
#include <cmath>
#include <limits>

#include "secgame/error.hpp"
#include "secgame/oracle.hpp"

namespace secgame::oracle {

namespace {

using normalform::RowSense;

// Dense tableau: m constraint rows plus the reduced-cost row at index m.
// The last column holds the right-hand side (objective value in row m).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double rhs(std::size_t r) const { return at(r, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (n_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (n_ + 1)));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> data_;
};

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

// Maximisation with reduced costs stored in the last row; columns >= allowed
// never enter. Bland's rule on both the entering and the leaving choice.
PhaseResult run_phase(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed,
                      std::size_t& pivots, std::size_t limit) {
  const std::size_t m = t.rows();
  while (true) {
    std::size_t enter = allowed;
    for (std::size_t c = 0; c < allowed; ++c) {
      if (t.at(m, c) < -kSimplexTol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed) return PhaseResult::Optimal;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= kSimplexTol) continue;
      const double ratio = t.rhs(r) / a;
      if (leave == m || ratio < best - 1e-12 ||
          (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == m) return PhaseResult::Unbounded;
    if (pivots >= limit) return PhaseResult::IterationLimit;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++pivots;
  }
}

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

std::vector<double> StandardForm::recover(const std::vector<double>& x) const {
  std::vector<double> out(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const VarMap& m = vars[v];
    out[v] = m.shift + m.pos_sign * x.at(m.pos) - (m.neg ? x.at(*m.neg) : 0.0);
  }
  return out;
}

StandardForm to_standard_form(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  StandardForm sf;
  sf.vars.resize(n);

  // Structural columns first.
  std::size_t col = 0;
  std::vector<std::size_t> upper_rows;  // variables needing x' <= upper - lower
  for (std::size_t v = 0; v < n; ++v) {
    auto& m = sf.vars[v];
    const bool lo = std::isfinite(lp.lower[v]);
    const bool hi = std::isfinite(lp.upper[v]);
    m.pos = col++;
    if (lo) {
      m.shift = lp.lower[v];
      if (hi) upper_rows.push_back(v);
    } else if (hi) {
      m.shift = lp.upper[v];
      m.pos_sign = -1.0;
    } else {
      m.neg = col++;
    }
  }
  const std::size_t structural = col;

  // Rows written as coeffs . x' (sense) rhs - coeffs . shift.
  struct RawRow {
    std::vector<double> a;
    int slack_sign;  // 0 equality, +1 for <=, -1 for >=
    double rhs;
  };
  std::vector<RawRow> raw;
  auto expand = [&](const std::vector<double>& coeffs, double rhs, int slack) {
    RawRow r{std::vector<double>(structural, 0.0), slack, rhs};
    for (std::size_t v = 0; v < n; ++v) {
      const double a = coeffs[v];
      if (a == 0.0) continue;
      const auto& m = sf.vars[v];
      r.a[m.pos] += a * m.pos_sign;
      if (m.neg) r.a[*m.neg] -= a;
      r.rhs -= a * m.shift;
    }
    raw.push_back(std::move(r));
  };
  for (const auto& row : lp.inequalities) {
    expand(row.coeffs, row.rhs, row.sense == RowSense::LessEqual ? 1 : -1);
  }
  for (const auto& row : lp.equalities) expand(row.coeffs, row.rhs, 0);
  for (std::size_t v : upper_rows) {
    std::vector<double> unit(n, 0.0);
    unit[v] = 1.0;
    expand(unit, lp.upper[v], 1);
  }

  std::size_t slacks = 0;
  for (const auto& r : raw) slacks += r.slack_sign != 0 ? 1 : 0;
  const std::size_t total = structural + slacks;
  std::size_t next_slack = structural;
  for (auto& r : raw) {
    std::vector<double> a(total, 0.0);
    std::copy(r.a.begin(), r.a.end(), a.begin());
    if (r.slack_sign != 0) a[next_slack++] = static_cast<double>(r.slack_sign);
    double rhs = r.rhs;
    if (rhs < 0.0) {
      for (double& x : a) x = -x;
      rhs = -rhs;
    }
    sf.A.push_back(std::move(a));
    sf.b.push_back(rhs);
  }

  sf.c.assign(total, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const double c = lp.objective[v];
    const auto& m = sf.vars[v];
    sf.c[m.pos] += c * m.pos_sign;
    if (m.neg) sf.c[*m.neg] -= c;
    sf.offset += c * m.shift;
  }
  return sf;
}

SimplexReport simplex_solve_detailed(const LinearProgram& lp, std::size_t pivot_limit) {
  SimplexReport rep;
  rep.form = to_standard_form(lp);
  const StandardForm& sf = rep.form;
  const std::size_t m = sf.A.size();
  const std::size_t n = sf.c.size();

  // Phase one: one artificial per row, maximise -sum(artificials).
  Tableau t(m, n + m);
  rep.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sf.A[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sf.b[r];
    rep.basis[r] = n + r;
  }
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += sf.A[r][c];
    t.at(m, c) = -s;
  }
  double bsum = 0.0;
  double bmax = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    bsum += sf.b[r];
    bmax = std::max(bmax, sf.b[r]);
  }
  t.rhs(m) = -bsum;

  const PhaseResult p1 = run_phase(t, rep.basis, n + m, rep.pivots, pivot_limit);
  if (p1 == PhaseResult::IterationLimit) {
    rep.solution.status = LpStatus::IterationLimit;
    return rep;
  }
  if (t.rhs(m) < -kSimplexTol * bmax) {
    rep.solution.status = LpStatus::Infeasible;
    return rep;
  }

  // Drive artificials out of the basis; rows where that is impossible are redundant.
  rep.rows.resize(m);
  for (std::size_t r = 0; r < m; ++r) rep.rows[r] = r;
  for (std::size_t r = 0; r < t.rows();) {
    if (rep.basis[r] < n) {
      ++r;
      continue;
    }
    std::size_t swap_in = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > kSimplexTol) {
        swap_in = c;
        break;
      }
    }
    if (swap_in == n) {
      t.drop_row(r);
      rep.basis.erase(rep.basis.begin() + static_cast<std::ptrdiff_t>(r));
      rep.rows.erase(rep.rows.begin() + static_cast<std::ptrdiff_t>(r));
      continue;
    }
    t.pivot(r, swap_in);
    rep.basis[r] = swap_in;
    ++rep.pivots;
    ++r;
  }

  // Phase two objective row: reduced costs c_B B^-1 A - c over structural columns.
  const std::size_t mr = t.rows();
  for (std::size_t c = 0; c <= n + m; ++c) t.at(mr, c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.at(mr, c) = -sf.c[c];
  for (std::size_t r = 0; r < mr; ++r) {
    const double cb = sf.c[rep.basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < n; ++c) t.at(mr, c) += cb * t.at(r, c);
    t.rhs(mr) += cb * t.rhs(r);
  }

  const PhaseResult p2 = run_phase(t, rep.basis, n, rep.pivots, pivot_limit);
  if (p2 == PhaseResult::IterationLimit) {
    rep.solution.status = LpStatus::IterationLimit;
    return rep;
  }
  if (p2 == PhaseResult::Unbounded) {
    rep.solution.status = LpStatus::Unbounded;
    return rep;
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t r = 0; r < mr; ++r) x[rep.basis[r]] = std::max(0.0, t.rhs(r));
  rep.solution.status = LpStatus::Optimal;
  rep.solution.assignment = sf.recover(x);
  rep.solution.optimal_value = lp_objective(lp, rep.solution.assignment);
  return rep;
}

LpSolution simplex_solve(const LinearProgram& lp) { return simplex_solve_detailed(lp).solution; }

double lp_objective(const LinearProgram& lp, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t v = 0; v < lp.num_variables(); ++v) s += lp.objective[v] * x.at(v);
  return s;
}

double lp_violation(const LinearProgram& lp, const std::vector<double>& x) {
  auto dot = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) s += a[v] * x.at(v);
    return s;
  };
  double worst = 0.0;
  for (const auto& r : lp.inequalities) {
    const double lhs = dot(r.coeffs);
    worst = std::max(worst, r.sense == RowSense::LessEqual ? lhs - r.rhs : r.rhs - lhs);
  }
  for (const auto& r : lp.equalities) worst = std::max(worst, std::abs(dot(r.coeffs) - r.rhs));
  for (std::size_t v = 0; v < lp.num_variables(); ++v) {
    worst = std::max({worst, lp.lower[v] - x.at(v), x.at(v) - lp.upper[v]});
  }
  return worst;
}

std::vector<double> attacker_lp_point(const model::AttackDistribution& sigma_a,
                                      const FacilityProfile& profile, const CostParams& params) {
  const model::FacilitySet targets = model::classify_facilities(profile).increased;
  const std::size_t m = targets.size();
  const double c0 = profile.baseline_cost();
  const double ca = params.attack_cost();
  std::vector<double> x(2 * m + 1, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const double s = sigma_a[targets[t]];
    x[t] = s;
    x[m + 1 + t] = std::min(s * (c0 - ca) + params.defense_cost(),
                            s * (profile.post_attack_cost(targets[t]) - ca));
  }
  x[m] = sigma_a.no_attack();
  return x;
}

}  // namespace secgame::oracle
