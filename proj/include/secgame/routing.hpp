#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "secgame/model.hpp"

namespace secgame::routing {

using EdgeIndex = std::size_t;

struct AffineLatency {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double load) const { return slope * load + intercept; }
};

struct Edge {
  std::string id;
  AffineLatency nominal;
  AffineLatency compromised;
};

struct Route {
  std::string id;
  std::vector<EdgeIndex> edges;
};

/// Parallel routes that may share serial edges, carrying an inelastic demand.
class RoutedNetwork {
 public:
  RoutedNetwork(std::vector<Edge> edges, std::vector<Route> routes, double demand);

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Route>& routes() const { return routes_; }
  double demand() const { return demand_; }
  std::optional<EdgeIndex> find_edge(const std::string& id) const;

  /// Nominal latencies everywhere except the compromised edge, if any.
  std::vector<AffineLatency> latencies_for_state(std::optional<EdgeIndex> compromised) const;

 private:
  std::vector<Edge> edges_;
  std::vector<Route> routes_;
  double demand_;
};

struct FlowAssignment {
  std::vector<double> route_flows;
  std::vector<double> edge_loads;
  std::vector<double> route_costs;
};

/// Route flows minimising the Beckmann potential for the given per-edge latencies.
FlowAssignment wardrop_equilibrium(const RoutedNetwork& network,
                                   const std::vector<AffineLatency>& latencies);

/// Largest amount by which a used route's cost exceeds the cheapest route.
double wardrop_violation(const FlowAssignment& flows, double used_tol = 1e-12);

/// sum_e integral_0^{w_e} latency_e.
double beckmann_potential(const RoutedNetwork& network, const std::vector<AffineLatency>& latencies,
                          const std::vector<double>& route_flows);

/// Demand-weighted average route cost at equilibrium; the cheapest route cost
/// when demand is zero.
double usage_cost_for_state(const RoutedNetwork& network, std::optional<EdgeIndex> compromised);

/// Facilities are the edges; C0 is the nominal usage cost and Ce the usage
/// cost with edge e compromised.
model::FacilityProfile profile_from_network(const RoutedNetwork& network);

}  // namespace secgame::routing
