#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "secgame/error.hpp"
#include "secgame/learning.hpp"

using namespace secgame::learning;
using secgame::model::CostParams;
using secgame::routing::AffineLatency;
using secgame::routing::Edge;
using secgame::routing::RoutedNetwork;

namespace {

RoutedNetwork lock_in_network(double demand = 5) {
  return RoutedNetwork({{"e1", {1, 3}, {0, 16}}, {"e2", {0.25, 3}, {7.0 / 3, 50}}, {"e3", {0.5, 1}, {2, 1}}},
                       {{"r1", {1, 0}}, {"r2", {2, 0}}}, demand);
}

Belief lock_in_prior() { return Belief({1.0 / 12, 1.0 / 3, 1.0 / 12, 0.5}); }

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("state distribution from equilibria") {
  const auto p = testing::three_facility();
  auto d = state_distribution(secgame::normalform::solve_ne(p, CostParams(0.5, 0.3)));
  CHECK(d[0] == doctest::Approx(1.0 / 60).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(3.0 / 80).epsilon(1e-12));
  CHECK(d[2] == doctest::Approx(3.0 / 20).epsilon(1e-12));
  CHECK(d[3] == doctest::Approx(0.7958333333).epsilon(1e-9));

  d = state_distribution(secgame::sequential::solve_spe(p, CostParams(0.5, 0.8)));
  CHECK(d[3] == 1.0);
  d = state_distribution(secgame::normalform::solve_ne(p, CostParams(3.5, 1)));
  CHECK(d[3] == 1.0);
}

TEST_CASE("noise source is reproducible and in range") {
  NoiseSource a(3);
  NoiseSource b(3);
  for (int k = 0; k < 1000; ++k) {
    const double x = a.noise(3);
    CHECK(x == b.noise(3));
    CHECK(x >= -3);
    CHECK(x < 3);
  }
}

TEST_CASE("expected latencies mix nominal and compromised by belief") {
  const auto net = lock_in_network();
  const auto lat = expected_latencies(net, lock_in_prior());
  CHECK(lat[1].slope == doctest::Approx(1.0 / 3 * 7 / 3 + 2.0 / 3 * 0.25));
  CHECK(lat[1].intercept == doctest::Approx(50.0 / 3 + 2));
  CHECK(lat[0].intercept == doctest::Approx(1.0 / 12 * 16 + 11.0 / 12 * 3));
}

TEST_CASE("a stage rules out states whose predictions miss by more than the noise") {
  const auto net = lock_in_network();
  NoiseSource noise(1);
  const StageRecord rec = stage_step(lock_in_prior(), net, 3, 3, noise);
  CHECK(rec.flows.route_flows[0] == 0.0);
  CHECK(rec.flows.route_flows[1] == doctest::Approx(5));
  CHECK(!rec.observed[1]);
  CHECK(rec.observed[0]);
  CHECK(rec.after[0] == 0.0);
  CHECK(rec.after[2] == 0.0);
  // e2 and no attack predict the same observations: their ratio is kept.
  CHECK(rec.after[1] / rec.after[3] == doctest::Approx((1.0 / 3) / 0.5));
  CHECK(!rec.degenerate);

  // A second stage with only indistinguishable states left changes nothing.
  const StageRecord again = stage_step(rec.after, net, 3, 3, noise);
  CHECK(again.after.probs() == rec.after.probs());
}

TEST_CASE("no demand means nothing is observed") {
  const auto net = lock_in_network(0);
  NoiseSource noise(1);
  const StageRecord rec = stage_step(lock_in_prior(), net, 3, 3, noise);
  for (const auto& o : rec.observed) CHECK(!o);
  CHECK(rec.after.probs() == lock_in_prior().probs());
}

TEST_CASE("misspecified observations keep the belief and flag the stage") {
  // The belief excludes the true state (e1 compromised), whose latency is far off.
  const auto net = lock_in_network();
  NoiseSource noise(1);
  const Belief wrong({0, 0.5, 0, 0.5});
  const StageRecord rec = stage_step(wrong, net, 3, 0, noise);
  CHECK(rec.degenerate);
  CHECK(rec.after.probs() == wrong.probs());
}

TEST_CASE("simulation is deterministic and respects the horizon") {
  const auto net = lock_in_network();
  SimulationConfig cfg;
  cfg.prior = lock_in_prior();
  cfg.states = StateDistribution({0, 0, 0, 1});
  cfg.noise_half_width = 3;
  cfg.horizon = 1;
  cfg.seed = 5;
  auto t = run_simulation(cfg, net);
  CHECK(t.stages.size() == 1);
  CHECK(t.realized_state == 3);

  cfg.horizon = 30;
  const auto a = run_simulation(cfg, net);
  const auto b = run_simulation(cfg, net);
  std::ostringstream sa;
  std::ostringstream sb;
  write_trace_csv(sa, a, net);
  write_trace_csv(sb, b, net);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("# seed 5\n", 0) == 0);

  cfg.prior = Belief({0, 0.5, 0, 0.5});
  cfg.states = StateDistribution({0.5, 0, 0, 0.5});
  CHECK_THROWS_AS(run_simulation(cfg, net), secgame::Error);
}

TEST_CASE("true state keeps positive belief and beliefs stay normalised") {
  const auto net = lock_in_network(10);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SimulationConfig cfg;
    cfg.prior = lock_in_prior();
    cfg.states = StateDistribution({0.25, 0.25, 0.25, 0.25});
    cfg.noise_half_width = 3;
    cfg.horizon = 40;
    cfg.seed = seed;
    const auto t = run_simulation(cfg, net);
    for (const auto& rec : t.stages) {
      double s = 0.0;
      for (double p : rec.after.probs()) s += p;
      CHECK(std::abs(s - 1.0) <= 1e-9);
      CHECK(rec.after[t.realized_state] > 0.0);
      CHECK(!rec.degenerate);
    }
  }
}

}
