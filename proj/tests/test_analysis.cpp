#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "secgame/analysis.hpp"
#include "secgame/error.hpp"

using namespace secgame::analysis;
using secgame::model::CostParams;
using testing::three_facility;

TEST_SUITE("analysis") {

TEST_CASE("cost regions of the three-facility instance") {
  const auto p = three_facility();
  CHECK(classify_cost_region(p, CostParams(0.5, 0.3)) == CostRegion::L);
  CHECK(classify_cost_region(p, CostParams(0.5, 0.8)) == CostRegion::M);
  CHECK(classify_cost_region(p, CostParams(0.5, 1.5)) == CostRegion::H);
  CHECK(classify_cost_region(p, CostParams(3.5, 1)) == CostRegion::NoVulnerable);
  CHECK(classify_cost_region(p, CostParams(0.5, 12.0 / 11)) == CostRegion::Boundary);
  CHECK(classify_cost_region(p, CostParams(0.5, 6.0 / 11)) == CostRegion::Boundary);
  CHECK(classify_cost_region(testing::profile_of(5, {5, 4}), CostParams(1, 1)) == CostRegion::NoVulnerable);
}

TEST_CASE("game comparison at the golden points") {
  const auto p = three_facility();
  auto c = compare_games(p, CostParams(0.5, 0.8));
  CHECK(c.region == CostRegion::M);
  CHECK(c.ne.defender_utility == doctest::Approx(-18.9333333333).epsilon(1e-10));
  CHECK(c.spe.defender_utility == doctest::Approx(-18.6666666667).epsilon(1e-10));
  CHECK(c.utility_gap == doctest::Approx(0.2666666667).epsilon(1e-9));
  CHECK(c.first_mover_advantage);

  c = compare_games(p, CostParams(0.5, 1.5));
  CHECK(c.region == CostRegion::H);
  CHECK(c.utility_gap == 0.0);
  CHECK(!c.first_mover_advantage);
  CHECK(c.ne.defender_utility == doctest::Approx(-19.5));

  c = compare_games(p, CostParams(0.5, 0.3));
  CHECK(c.region == CostRegion::L);
  CHECK(c.ne.defender_utility == doctest::Approx(-17.9));
  CHECK(c.spe.defender_utility == doctest::Approx(-17.625));
  CHECK(c.utility_gap == doctest::Approx(0.275));

  CHECK_THROWS_AS(compare_games(p, CostParams(0.5, 12.0 / 11)), secgame::Error);
}

TEST_CASE("sweep of the three-facility instance") {
  const auto p = three_facility();
  const AxisRange axis{0.0, 4.0, 200};
  const auto rows = regime_sweep(p, axis, axis);
  REQUIRE(rows.size() == 40000);
  std::set<std::string> ne;
  std::set<std::string> spe;
  for (const auto& r : rows) {
    if (r.ne.kind != secgame::normalform::NeRegimeLabel::Kind::Boundary) ne.insert(r.ne.to_string());
    if (r.spe.kind != secgame::sequential::SpeRegimeLabel::Kind::Boundary) spe.insert(r.spe.to_string());
    if (r.ca > 3.0) {
      CHECK(r.ne.to_string() == "I-0");
      CHECK(r.spe.to_string() == "I~-0");
    }
    if (r.ca < 3.0) {
      const double bar = *secgame::normalform::cd_threshold_bar(p, r.ca);
      const double tilde = secgame::sequential::cd_threshold_tilde(p, r.ca);
      CHECK((r.region == CostRegion::M) == (r.cd > bar && r.cd < tilde));
    }
  }
  CHECK(ne.size() == 7);
  CHECK(spe.size() == 7);

  const auto serial = regime_sweep_serial(p, axis, axis);
  std::ostringstream a;
  std::ostringstream b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, serial);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("ca,cd,ne_regime,spe_regime,region,ud,uds,ua,uas\n", 0) == 0);
}

TEST_CASE("sweep utilities follow the region ordering and closed forms") {
  const auto p = three_facility();
  const auto rows = regime_sweep(p, {0.0, 4.0, 60}, {0.0, 4.0, 60});
  const secgame::model::CostLadder ladder(p);
  for (const auto& r : rows) {
    if (!r.ud || !r.uds || r.region == CostRegion::Boundary) continue;
    CHECK(*r.uds >= *r.ud - 1e-12);
    CHECK(*r.uas <= *r.ua + 1e-12);
    const bool strict_d = *r.uds > *r.ud + 1e-12;
    const bool strict_a = *r.uas < *r.ua - 1e-12;
    CHECK(strict_d == (r.region == CostRegion::L || r.region == CostRegion::M));
    CHECK(strict_a == (r.region == CostRegion::M));
    if (r.ne.kind == secgame::normalform::NeRegimeLabel::Kind::TypeII) {
      CHECK(*r.ua == doctest::Approx(ladder.group(r.ne.index).cost - r.ca));
    } else {
      CHECK(*r.ua == 17);
    }
    if (r.spe.kind == secgame::sequential::SpeRegimeLabel::Kind::TypeIITilde) {
      CHECK(*r.uas == doctest::Approx(ladder.group(r.spe.index).cost - r.ca));
    } else {
      CHECK(*r.uas == 17);
    }
  }
  // Own-cost monotonicity along each grid line.
  for (std::size_t a = 0; a < 60; ++a) {
    for (std::size_t d = 1; d < 60; ++d) {
      const auto& lo = rows[a * 60 + d - 1];
      const auto& hi = rows[a * 60 + d];
      if (lo.ud && hi.ud) CHECK(*hi.ud <= *lo.ud + 1e-12);
      if (lo.uds && hi.uds) CHECK(*hi.uds <= *lo.uds + 1e-12);
    }
  }
  for (std::size_t a = 1; a < 60; ++a) {
    for (std::size_t d = 0; d < 60; ++d) {
      const auto& lo = rows[(a - 1) * 60 + d];
      const auto& hi = rows[a * 60 + d];
      if (lo.ua && hi.ua) CHECK(*hi.ua <= *lo.ua + 1e-12);
      if (lo.uas && hi.uas) CHECK(*hi.uas <= *lo.uas + 1e-12);
      if (lo.ud && hi.ud) CHECK(*hi.ud >= *lo.ud - 1e-12);
    }
  }
}

TEST_CASE("sweep rejects degenerate ranges") {
  CHECK_THROWS_AS(regime_sweep(three_facility(), {0, 4, 1}, {0, 4, 10}), secgame::Error);
  CHECK_THROWS_AS(regime_sweep(three_facility(), {2, 1, 10}, {0, 4, 10}), secgame::Error);
}

}
