#include "secgame/learning.hpp"

#include <cmath>
#include <cstdio>

#include "secgame/error.hpp"

namespace secgame::learning {

namespace {

constexpr double kSumTol = 1e-12;

void put(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  os << buf;
}

StateDistribution from_attack(const model::EffortVector& rho, const model::AttackDistribution& sigma) {
  std::vector<double> p(rho.size() + 1, 0.0);
  double attacked = 0.0;
  for (std::size_t e = 0; e < rho.size(); ++e) {
    p[e] = sigma[e] * (1.0 - rho[e]);
    attacked += p[e];
  }
  p.back() = std::max(0.0, 1.0 - attacked);
  return StateDistribution(std::move(p));
}

}  // namespace

StateDistribution::StateDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw Error(ErrorKind::InvalidInput, "a state distribution needs an edge and the no-attack state");
  double s = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::InvalidInput, "state probabilities must be finite and nonnegative");
    }
    s += p;
  }
  if (std::abs(s - 1.0) > kSumTol) throw Error(ErrorKind::InvalidInput, "state probabilities must sum to 1");
}

StateDistribution state_distribution(const normalform::NormalFormEquilibrium& eq) {
  return from_attack(eq.effort, eq.canonical_attack);
}

StateDistribution state_distribution(const sequential::SpeOutcome& spe) {
  if (spe.on_path.deterred) {
    std::vector<double> p(spe.effort.size() + 1, 0.0);
    p.back() = 1.0;
    return StateDistribution(std::move(p));
  }
  return from_attack(spe.effort, spe.on_path.witness);
}

double NoiseSource::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::vector<routing::AffineLatency> expected_latencies(const RoutedNetwork& network,
                                                       const Belief& belief) {
  if (belief.edges() != network.edges().size()) {
    throw Error(ErrorKind::InvalidInput, "belief must cover every edge plus the no-attack state");
  }
  std::vector<routing::AffineLatency> out;
  for (EdgeIndex e = 0; e < network.edges().size(); ++e) {
    const auto& edge = network.edges()[e];
    const double th = belief[e];
    if (th == 0.0) {
      out.push_back(edge.nominal);
    } else if (th == 1.0) {
      out.push_back(edge.compromised);
    } else {
      out.push_back({th * edge.compromised.slope + (1.0 - th) * edge.nominal.slope,
                     th * edge.compromised.intercept + (1.0 - th) * edge.nominal.intercept});
    }
  }
  return out;
}

StageRecord stage_step(const Belief& belief, const RoutedNetwork& network, double noise_half_width,
                       State realized_state, NoiseSource& noise) {
  if (!(noise_half_width > 0.0)) throw Error(ErrorKind::InvalidInput, "noise half-width must be positive");
  const std::size_t n = network.edges().size();
  if (realized_state > n) throw Error(ErrorKind::InvalidInput, "unknown realised state");

  StageRecord rec;
  rec.before = belief;
  rec.flows = routing::wardrop_equilibrium(network, expected_latencies(network, belief));
  rec.observed.assign(n, std::nullopt);
  for (EdgeIndex e = 0; e < n; ++e) {
    const double w = rec.flows.edge_loads[e];
    if (!(w > 0.0)) continue;
    const auto& edge = network.edges()[e];
    const double truth = realized_state == e ? edge.compromised(w) : edge.nominal(w);
    rec.observed[e] = truth + noise.noise(noise_half_width);
  }

  // Uniform noise: a state's likelihood is (2b)^-k if every observation lies
  // within b of its prediction and zero otherwise.
  std::vector<bool> consistent(n + 1, true);
  bool any_ruled_out = false;
  bool any_left = false;
  for (State s = 0; s <= n; ++s) {
    if (belief[s] == 0.0) continue;
    for (EdgeIndex e = 0; e < n && consistent[s]; ++e) {
      if (!rec.observed[e]) continue;
      const auto& edge = network.edges()[e];
      const double w = rec.flows.edge_loads[e];
      const double predicted = s == e ? edge.compromised(w) : edge.nominal(w);
      if (std::abs(*rec.observed[e] - predicted) > noise_half_width) consistent[s] = false;
    }
    if (consistent[s]) {
      any_left = true;
    } else {
      any_ruled_out = true;
    }
  }
  if (!any_left) {
    rec.after = belief;
    rec.degenerate = true;
    return rec;
  }
  if (!any_ruled_out) {
    rec.after = belief;
    return rec;
  }
  std::vector<double> post(n + 1, 0.0);
  double total = 0.0;
  for (State s = 0; s <= n; ++s) {
    if (consistent[s]) total += belief[s];
  }
  double check = 0.0;
  for (State s = 0; s <= n; ++s) {
    if (consistent[s]) post[s] = belief[s] / total;
    check += post[s];
  }
  // Absorb the rounding residue in the largest entry so the sum stays within tolerance.
  if (std::abs(check - 1.0) > kSumTol) {
    std::size_t big = 0;
    for (State s = 1; s <= n; ++s) {
      if (post[s] > post[big]) big = s;
    }
    post[big] += 1.0 - check;
  }
  rec.after = Belief(std::move(post));
  return rec;
}

LearningTrace run_simulation(const SimulationConfig& config, const RoutedNetwork& network) {
  const std::size_t n = network.edges().size();
  if (config.horizon < 1) throw Error(ErrorKind::InvalidInput, "horizon must be at least 1");
  if (config.prior.edges() != n || config.states.edges() != n) {
    throw Error(ErrorKind::InvalidInput, "prior and state distribution must cover every edge");
  }
  for (State s = 0; s <= n; ++s) {
    if (config.states[s] > 0.0 && !(config.prior[s] > 0.0)) {
      throw Error(ErrorKind::InvalidInput, "prior rules out a state that can occur");
    }
  }
  NoiseSource noise(config.seed);
  LearningTrace trace;
  trace.seed = config.seed;
  if (config.fixed_state) {
    if (*config.fixed_state > n) throw Error(ErrorKind::InvalidInput, "unknown fixed state");
    trace.realized_state = *config.fixed_state;
  } else {
    const double u = noise.uniform();
    double acc = 0.0;
    trace.realized_state = n;
    for (State s = 0; s <= n; ++s) {
      acc += config.states[s];
      if (u < acc) {
        trace.realized_state = s;
        break;
      }
    }
  }
  Belief belief = config.prior;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    StageRecord rec = stage_step(belief, network, config.noise_half_width, trace.realized_state, noise);
    rec.t = t;
    belief = rec.after;
    trace.stages.push_back(std::move(rec));
  }
  return trace;
}

void write_trace_csv(std::ostream& os, const LearningTrace& trace, const RoutedNetwork& network) {
  os << "# seed " << trace.seed << '\n';
  const State none = network.edges().size();
  os << "# realized_state " << (trace.realized_state == none ? std::string("empty")
                                                              : network.edges()[trace.realized_state].id)
     << '\n';
  os << 't';
  for (const auto& e : network.edges()) os << ",theta_" << e.id;
  os << ",theta_empty";
  for (const auto& r : network.routes()) os << ",q_" << r.id;
  for (const auto& e : network.edges()) os << ",obs_" << e.id;
  os << '\n';
  for (const StageRecord& rec : trace.stages) {
    os << rec.t;
    for (double p : rec.after.probs()) {
      os << ',';
      put(os, p);
    }
    for (double q : rec.flows.route_flows) {
      os << ',';
      put(os, q);
    }
    for (const auto& o : rec.observed) {
      os << ',';
      if (o) put(os, *o);
    }
    os << '\n';
  }
}

}  // namespace secgame::learning
