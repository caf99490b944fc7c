#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "secgame/normalform.hpp"
#include "secgame/routing.hpp"
#include "secgame/sequential.hpp"

namespace secgame::learning {

using routing::EdgeIndex;
using routing::FlowAssignment;
using routing::RoutedNetwork;

/// States are edge indices 0..n-1 (that edge compromised) plus n for no attack.
using State = std::size_t;

/// Probability vector over the n+1 states, no-attack last.
class StateDistribution {
 public:
  StateDistribution() = default;
  explicit StateDistribution(std::vector<double> probs);
  std::size_t edges() const { return probs_.size() - 1; }
  State none() const { return probs_.size() - 1; }
  double operator[](State s) const { return probs_.at(s); }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Travellers' belief over states; same layout as StateDistribution.
using Belief = StateDistribution;

/// p(e) = sigma(e) (1 - rho_e), remainder on no attack.
StateDistribution state_distribution(const normalform::NormalFormEquilibrium& eq);
StateDistribution state_distribution(const sequential::SpeOutcome& spe);

/// Uniform noise on [-b, b] drawn from a 64-bit Mersenne Twister.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double noise(double half_width) { return -half_width + 2.0 * half_width * uniform(); }

 private:
  std::mt19937_64 rng_;
};

struct StageRecord {
  std::size_t t = 0;
  Belief before;
  FlowAssignment flows;
  /// Realised cost per edge; empty for edges that carried no flow.
  std::vector<std::optional<double>> observed;
  Belief after;
  /// Every state was ruled out; the belief was kept unchanged.
  bool degenerate = false;
};

struct LearningTrace {
  std::uint64_t seed = 0;
  State realized_state = 0;
  std::vector<StageRecord> stages;
};

/// Belief-weighted latencies: theta(e) compromised + (1 - theta(e)) nominal.
std::vector<routing::AffineLatency> expected_latencies(const RoutedNetwork& network,
                                                       const Belief& belief);

/// One stage: route on expected latencies, observe used edges with noise,
/// then update by Bayes' rule. States whose likelihoods all agree leave the
/// belief untouched.
StageRecord stage_step(const Belief& belief, const RoutedNetwork& network, double noise_half_width,
                       State realized_state, NoiseSource& noise);

struct SimulationConfig {
  Belief prior;
  StateDistribution states;
  double noise_half_width = 0.0;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  /// Skip sampling and use this state.
  std::optional<State> fixed_state;
};

LearningTrace run_simulation(const SimulationConfig& config, const RoutedNetwork& network);

/// Columns: t, theta_<edge>..., theta_empty, q_<route>..., obs_<edge>...;
/// preceded by a "# seed N" line. Beliefs are the posteriors of each stage.
void write_trace_csv(std::ostream& os, const LearningTrace& trace, const RoutedNetwork& network);

}  // namespace secgame::learning
