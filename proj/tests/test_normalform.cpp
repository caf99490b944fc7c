#include <doctest.h>

#include "helpers.hpp"
#include "secgame/error.hpp"
#include "secgame/normalform.hpp"
#include "secgame/oracle.hpp"

using namespace secgame::normalform;
using secgame::Error;
using secgame::ErrorKind;
using secgame::model::CostParams;
using secgame::model::EffortVector;
using testing::three_facility;

TEST_SUITE("normalform") {

TEST_CASE("threshold attack probability") {
  const auto p = three_facility();
  CHECK(threshold_attack_prob(p, CostParams(0.5, 0.3), 0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(threshold_attack_prob(p, CostParams(0.5, 0.3), 2) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(threshold_attack_prob(p, CostParams(0.5, 3), 0) == 1.0);
  const auto q = testing::profile_of(10, {12, 10});
  CHECK_THROWS_AS(threshold_attack_prob(q, CostParams(1, 1), 1), Error);
}

TEST_CASE("defense cost threshold over vulnerable facilities") {
  const auto p = three_facility();
  CHECK(*cd_threshold_bar(p, 0.5) == doctest::Approx(6.0 / 11).epsilon(1e-14));
  CHECK(*cd_threshold_bar(p, 1.5) == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(!cd_threshold_bar(p, 3.5));
}

TEST_CASE("regime classification") {
  const auto p = three_facility();
  CHECK(classify_regime_ne(p, CostParams(0.5, 0.3)).to_string() == "I-3");
  CHECK(classify_regime_ne(p, CostParams(0.5, 0.8)).to_string() == "II-3");
  CHECK(classify_regime_ne(p, CostParams(3.5, 1)).to_string() == "I-0");
  CHECK(classify_regime_ne(p, CostParams(0.5, 1.5)).to_string() == "II-2");
  CHECK(classify_regime_ne(p, CostParams(0.5, 4)).to_string() == "II-1");
  CHECK(classify_regime_ne(p, CostParams(1.5, 1)).to_string() == "I-2");
  CHECK(classify_regime_ne(p, CostParams(1.0, 1)).kind == NeRegimeLabel::Kind::Boundary);
  CHECK(classify_regime_ne(p, CostParams(0.5, 6.0 / 11)).kind == NeRegimeLabel::Kind::Boundary);
  CHECK(classify_regime_ne(p, CostParams(0.5, 1.2)).kind == NeRegimeLabel::Kind::Boundary);
  CHECK(classify_regime_ne(p, CostParams(3, 1)).kind == NeRegimeLabel::Kind::Boundary);
}

TEST_CASE("solve_ne in the type I regime") {
  const auto p = three_facility();
  const auto eq = solve_ne(p, CostParams(0.5, 0.3));
  CHECK(eq.effort[0] == doctest::Approx(5.0 / 6).epsilon(1e-15));
  CHECK(eq.effort[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(eq.effort[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq.canonical_attack[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(eq.canonical_attack[1] == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(eq.canonical_attack[2] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(eq.canonical_attack.no_attack() == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(eq.defender_utility == doctest::Approx(-17.9).epsilon(1e-14));
  CHECK(eq.attacker_utility == 17);
  CHECK(eq.canonical_attack.total_attack() < 1.0);
}

TEST_CASE("solve_ne in type II regimes") {
  const auto p = three_facility();
  auto eq = solve_ne(p, CostParams(0.5, 0.8));
  CHECK(eq.effort[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(eq.effort[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq.effort[2] == 0.0);
  CHECK(eq.canonical_attack[0] == doctest::Approx(4.0 / 15).epsilon(1e-14));
  CHECK(eq.canonical_attack[1] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(eq.canonical_attack[2] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(eq.canonical_attack.no_attack() == 0.0);
  CHECK(eq.defender_utility == doctest::Approx(-18 - (2 * 0.8 / 3 + 0.8 / 2)).epsilon(1e-14));
  CHECK(eq.attacker_utility == doctest::Approx(17.5).epsilon(1e-15));
  CHECK(eq.attack_set.free == secgame::model::FacilitySet{2});
  CHECK(eq.attack_set.free_mass == doctest::Approx(1.0 / 3).epsilon(1e-14));

  eq = solve_ne(p, CostParams(3.5, 1));
  CHECK(eq.effort == EffortVector::zeros(3));
  CHECK(eq.canonical_attack.no_attack() == 1.0);
  CHECK(eq.defender_utility == -17);
  CHECK(eq.attacker_utility == 17);
}

TEST_CASE("solve_ne declines on boundaries") {
  try {
    solve_ne(three_facility(), CostParams(1.0, 0.3));
    FAIL("expected a boundary error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BoundaryParameters);
  }
}

TEST_CASE("tied costs share one group") {
  const auto p = testing::profile_of(17, {20, 20, 18});
  const auto eq = solve_ne(p, CostParams(0.5, 0.3));
  CHECK(eq.regime.to_string() == "I-2");
  CHECK(eq.effort[0] == eq.effort[1]);
  const auto rep = secgame::oracle::verify_ne(eq, p, CostParams(0.5, 0.3), 1e-9);
  CHECK(rep.passed);
}

TEST_CASE("non-increasing facilities are neither defended nor attacked") {
  const auto p = testing::profile_of(5, {9, 5, 3, 7});
  for (double cd : {0.5, 2.0, 6.0}) {
    const auto eq = solve_ne(p, CostParams(1.0, cd));
    CHECK(eq.effort[1] == 0.0);
    CHECK(eq.effort[2] == 0.0);
    CHECK(eq.canonical_attack[1] == 0.0);
    CHECK(eq.canonical_attack[2] == 0.0);
  }
}

TEST_CASE("defender best response against an attack distribution") {
  const auto p = three_facility();
  const CostParams params(0.5, 0.3);
  auto r = defender_best_response(secgame::model::AttackDistribution({0.2, 0, 0}, 0.8), p, params);
  CHECK(r[0] == EffortResponse::One);
  CHECK(r[1] == EffortResponse::Zero);
  r = defender_best_response(secgame::model::AttackDistribution({0.05, 0, 0}, 0.95), p, params);
  CHECK(r[0] == EffortResponse::Zero);
  r = defender_best_response(secgame::model::AttackDistribution({0.1, 0, 0}, 0.9), p, params);
  CHECK(r[0] == EffortResponse::Free);
}

TEST_CASE("attacker LP shape and optimum") {
  const auto p = three_facility();
  const auto lp = build_attacker_lp(p, CostParams(0.5, 0.3));
  CHECK(lp.num_variables() == 7);
  CHECK(lp.inequalities.size() == 6);
  CHECK(lp.equalities.size() == 1);
  const auto sol = secgame::oracle::simplex_solve(lp);
  REQUIRE(sol.status == secgame::oracle::LpStatus::Optimal);
  CHECK(sol.optimal_value == doctest::Approx(17.625).epsilon(1e-12));

  const auto one = build_attacker_lp(testing::profile_of(17, {20}), CostParams(0.5, 0.3));
  CHECK(one.num_variables() == 3);
  CHECK(one.inequalities.size() == 2);
  CHECK(one.equalities.size() == 1);

  CHECK_THROWS_AS(build_attacker_lp(testing::profile_of(10, {10, 9}), CostParams(1, 1)), Error);
}

TEST_CASE("regime structure and monotonicity on random instances") {
  testing::InstanceGenerator gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = gen.next();
    const auto eq = solve_ne(inst.profile, inst.params);
    const double total = eq.canonical_attack.total_attack();
    const auto vuln = secgame::model::vulnerable_set(inst.profile, inst.params);
    if (eq.regime.kind == NeRegimeLabel::Kind::TypeI && eq.regime.index > 0) {
      CHECK(total > 0.0);
      CHECK(total < 1.0);
      for (auto e : vuln) CHECK(eq.effort[e] > 0.0);
    } else if (eq.regime.kind == NeRegimeLabel::Kind::TypeII) {
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    for (auto e : secgame::model::classify_facilities(inst.profile).increased) {
      CHECK(eq.canonical_attack[e] <= threshold_attack_prob(inst.profile, inst.params, e) + 1e-12);
    }
    // Ud nonincreasing in c_d and nondecreasing in c_a, checked on small steps.
    for (double f : {1.001, 1.01}) {
      const CostParams up_d(inst.params.attack_cost(), inst.params.defense_cost() * f);
      const CostParams up_a(inst.params.attack_cost() * f, inst.params.defense_cost());
      if (classify_regime_ne(inst.profile, up_d).kind != NeRegimeLabel::Kind::Boundary) {
        CHECK(solve_ne(inst.profile, up_d).defender_utility <= eq.defender_utility + 1e-12);
      }
      if (classify_regime_ne(inst.profile, up_a).kind != NeRegimeLabel::Kind::Boundary) {
        CHECK(solve_ne(inst.profile, up_a).defender_utility >= eq.defender_utility - 1e-12);
      }
    }
  }
}

}
