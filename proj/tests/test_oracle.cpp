#include <doctest.h>
#include <gmpxx.h>

#include <random>

#include "helpers.hpp"
#include "secgame/error.hpp"
#include "secgame/normalform.hpp"
#include "secgame/oracle.hpp"
#include "secgame/sequential.hpp"

using namespace secgame::oracle;
using secgame::Error;
using secgame::ErrorKind;
using secgame::model::AttackDistribution;
using secgame::model::CostParams;
using secgame::model::EffortVector;
using secgame::normalform::EqualityRow;
using secgame::normalform::InequalityRow;
using secgame::normalform::LinearProgram;
using secgame::normalform::RowSense;
using testing::three_facility;

namespace {

LinearProgram make_lp(std::size_t n) {
  LinearProgram lp;
  for (std::size_t v = 0; v < n; ++v) lp.labels.push_back("x" + std::to_string(v));
  lp.objective.assign(n, 0.0);
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, INFINITY);
  return lp;
}

// Solves B x_B = b exactly for the reported basis and returns c . x + offset.
mpq_class rational_value(const SimplexReport& rep) {
  const auto& sf = rep.form;
  const std::size_t m = rep.rows.size();
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m + 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < m; ++k) a[r][k] = sf.A[rep.rows[r]][rep.basis[k]];
    a[r][m] = sf.b[rep.rows[r]];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    REQUIRE(piv < m);
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= m; ++k) a[r][k] -= f * a[col][k];
    }
  }
  mpq_class value = sf.offset;
  for (std::size_t k = 0; k < m; ++k) value += mpq_class(sf.c[rep.basis[k]]) * a[k][m] / a[k][k];
  return value;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("simplex on tiny programs") {
  auto lp = make_lp(1);
  lp.objective = {1.0};
  lp.inequalities.push_back({{1.0}, RowSense::LessEqual, 1.0});
  auto sol = simplex_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.optimal_value == doctest::Approx(1.0));

  lp = make_lp(2);
  lp.equalities.push_back({{1.0, 1.0}, 1.0});
  lp.equalities.push_back({{1.0, 1.0}, 2.0});
  CHECK(simplex_solve(lp).status == LpStatus::Infeasible);

  lp = make_lp(2);
  lp.objective = {1.0, 0.0};
  lp.inequalities.push_back({{1.0, -1.0}, RowSense::LessEqual, 1.0});
  CHECK(simplex_solve(lp).status == LpStatus::Unbounded);

  // Free and upper-bounded variables: max -|x| style program.
  lp = make_lp(2);
  lp.objective = {1.0, 1.0};
  lp.lower = {-INFINITY, -INFINITY};
  lp.upper = {INFINITY, 3.0};
  lp.inequalities.push_back({{1.0, 0.0}, RowSense::LessEqual, -2.0});
  sol = simplex_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.optimal_value == doctest::Approx(1.0));
  CHECK(sol.assignment[0] == doctest::Approx(-2.0));
  CHECK(sol.assignment[1] == doctest::Approx(3.0));

  // Redundant equality rows are dropped rather than reported infeasible.
  lp = make_lp(2);
  lp.objective = {1.0, 2.0};
  lp.equalities.push_back({{1.0, 1.0}, 1.0});
  lp.equalities.push_back({{2.0, 2.0}, 2.0});
  sol = simplex_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.optimal_value == doctest::Approx(2.0));

  lp = make_lp(1);
  lp.objective = {1.0};
  lp.inequalities.push_back({{1.0}, RowSense::LessEqual, 5.0});
  CHECK(simplex_solve_detailed(lp, 0).solution.status == LpStatus::IterationLimit);
}

TEST_CASE("simplex agrees with an exact re-solve of its final basis") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> dim(1, 20);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = dim(rng);
    const std::size_t m = dim(rng);
    auto lp = make_lp(n);
    for (auto& c : lp.objective) c = u(rng);
    // Feasible (x = 0.5 satisfies every row) and bounded (box 0 <= x <= 3).
    for (std::size_t r = 0; r < m; ++r) {
      InequalityRow row{std::vector<double>(n), r % 2 ? RowSense::LessEqual : RowSense::GreaterEqual, 0.0};
      double at_half = 0.0;
      for (auto& a : row.coeffs) at_half += 0.5 * (a = u(rng));
      row.rhs = at_half + (row.sense == RowSense::LessEqual ? 1.0 : -1.0) * (0.1 + std::abs(u(rng)));
      lp.inequalities.push_back(row);
    }
    if (trial % 3 == 0) {
      EqualityRow eq{std::vector<double>(n), 0.0};
      for (auto& a : eq.coeffs) eq.rhs += 0.5 * (a = u(rng));
      lp.equalities.push_back(eq);
    }
    for (auto& h : lp.upper) h = 3.0;
    const auto rep = simplex_solve_detailed(lp);
    REQUIRE(rep.solution.status == LpStatus::Optimal);
    CHECK(lp_violation(lp, rep.solution.assignment) <= 1e-9);
    const double exact = rational_value(rep).get_d();
    CHECK(std::abs(exact - rep.solution.optimal_value) <= 1e-9);
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("attacker best response by enumeration") {
  const auto p = three_facility();
  const CostParams params(0.5, 1);
  auto br = attacker_best_response_enum(EffortVector::zeros(3), p, params);
  CHECK(br.utility == doctest::Approx(19.5));
  CHECK(br.facilities == secgame::model::FacilitySet{0});
  CHECK(!br.no_attack);

  br = attacker_best_response_enum(EffortVector({5.0 / 6, 0.75, 0.5}), p, params);
  CHECK(br.utility == doctest::Approx(17));
  CHECK(br.facilities == secgame::model::FacilitySet{0, 1, 2});
  CHECK(br.no_attack);

  br = attacker_best_response_enum(EffortVector::zeros(2), testing::profile_of(10, {10, 9}), params);
  CHECK(br.utility == 10);
  CHECK(br.facilities.empty());
  CHECK(br.no_attack);
}

TEST_CASE("verify_ne accepts the closed form and catches perturbations") {
  const auto p = three_facility();
  const CostParams low(0.5, 0.3);
  auto eq = secgame::normalform::solve_ne(p, low);
  auto rep = verify_ne(eq, p, low, 1e-9);
  CHECK(rep.passed);
  CHECK(rep.worst_violation < 1e-12);

  // Extra effort on e3 where the attacker mixes at positive probability.
  const CostParams mid(0.5, 0.8);
  auto pert = secgame::normalform::solve_ne(p, mid);
  pert.effort = EffortVector({pert.effort[0], pert.effort[1], pert.effort[2] + 0.05});
  rep = verify_ne(pert, p, mid, 1e-9);
  CHECK(!rep.passed);
  CHECK(!rep.defender_ok);

  // Shifting attack mass from no attack to e1 keeps the attacker indifferent
  // but leaves the defender wanting to secure e1 fully.
  auto shifted = eq;
  shifted.canonical_attack = AttackDistribution({0.2, 0.15, 0.3}, 0.35);
  rep = verify_ne(shifted, p, low, 1e-9);
  CHECK(!rep.passed);
  CHECK(rep.attacker_ok);
  CHECK(!rep.defender_ok);
}

TEST_CASE("verify_spe accepts closed forms and rejects inflated claims") {
  const auto p = three_facility();
  for (const auto& params : {CostParams(0.5, 0.8), CostParams(0.5, 1.5), CostParams(0.5, 0.3), CostParams(3.5, 1)}) {
    const auto s = secgame::sequential::solve_spe(p, params);
    const auto rep = verify_spe(s, p, params, 1e-3, 1e-9);
    CHECK(rep.passed);
  }
  const CostParams high(0.5, 1.5);
  const double at_threshold = spe_defender_utility(EffortVector({5.0 / 6, 0.75, 0.5}), p, high);
  CHECK(at_threshold == doctest::Approx(-20.125));
  CHECK(at_threshold < -19.5);

  auto inflated = secgame::sequential::solve_spe(p, CostParams(0.5, 0.8));
  inflated.defender_utility += 0.1;
  CHECK(!verify_spe(inflated, p, CostParams(0.5, 0.8), 1e-3, 1e-9).passed);

  // A suboptimal but internally consistent candidate is beaten on the grid.
  auto weak = secgame::sequential::solve_spe(p, high);
  weak.effort = EffortVector({5.0 / 6, 0.75, 0.5});
  weak.defender_utility = at_threshold;
  CHECK(!verify_spe(weak, p, high, 1e-3, 1e-9).passed);
}

TEST_CASE("grid optimum: level-set search matches exhaustive enumeration") {
  testing::InstanceGenerator gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = gen.next(3, 1);
    for (double h : {0.1, 0.05, 0.037}) {
      const auto fast = spe_grid_optimum(inst.profile, inst.params, h);
      const auto serial = spe_grid_optimum_serial(inst.profile, inst.params, h);
      const auto full = spe_grid_optimum_exhaustive(inst.profile, inst.params, h);
      CHECK(std::abs(fast.utility - full.utility) <= 1e-12);
      CHECK(serial.utility == fast.utility);
      CHECK(serial.effort == fast.effort);
      CHECK(spe_defender_utility(fast.effort, inst.profile, inst.params) == fast.utility);
    }
  }
}

TEST_CASE("grid optimum guards against large vulnerable sets") {
  const auto p = testing::profile_of(10, {20, 19, 18, 17, 16, 15, 14});
  try {
    spe_grid_optimum(p, CostParams(0.5, 1), 0.1);
    FAIL("expected TooManyVulnerable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooManyVulnerable);
  }
}

TEST_CASE("closed-form NE passes the LP and epsilon checks on random instances") {
  testing::InstanceGenerator gen(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = gen.next();
    const auto eq = secgame::normalform::solve_ne(inst.profile, inst.params);
    const auto lp = secgame::normalform::build_attacker_lp(inst.profile, inst.params);
    const auto sol = simplex_solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    const double value =
        secgame::model::zero_sum_utilities(eq.effort, eq.canonical_attack, inst.profile, inst.params).attacker;
    CHECK(std::abs(sol.optimal_value - value) <= 1e-8);
    const auto x = attacker_lp_point(eq.canonical_attack, inst.profile, inst.params);
    CHECK(lp_violation(lp, x) <= 1e-8);
    CHECK(lp_objective(lp, x) >= sol.optimal_value - 1e-8);
    CHECK(verify_ne(eq, inst.profile, inst.params, 1e-9).passed);
  }
}

}
