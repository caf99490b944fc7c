#include "secgame/routing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "secgame/error.hpp"

namespace secgame::routing {

namespace {

constexpr double kFlowTol = 1e-12;
constexpr double kKktTol = 1e-10;

struct Costs {
  Eigen::MatrixXd M;  // route-by-route: A^T diag(slope) A
  Eigen::VectorXd c;  // A^T intercept
};

Costs route_costs_model(const RoutedNetwork& net, const std::vector<AffineLatency>& lat) {
  const std::size_t R = net.routes().size();
  Costs out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(R)),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(R))};
  for (std::size_t r = 0; r < R; ++r) {
    for (EdgeIndex e : net.routes()[r].edges) {
      out.c(static_cast<Eigen::Index>(r)) += lat[e].intercept;
      for (std::size_t s = 0; s < R; ++s) {
        const auto& other = net.routes()[s].edges;
        if (std::find(other.begin(), other.end(), e) != other.end()) {
          out.M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) += lat[e].slope;
        }
      }
    }
  }
  return out;
}

// Solves the equal-cost system on `support`; empty optional when the system
// is inconsistent.
std::optional<std::pair<Eigen::VectorXd, double>> solve_support(const Costs& m,
                                                                const std::vector<std::size_t>& support,
                                                                double demand) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs(k + 1);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      K(a, b) = m.M(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)]),
                    static_cast<Eigen::Index>(support[static_cast<std::size_t>(b)]));
    }
    K(a, k) = -1.0;
    K(k, a) = 1.0;
    rhs(a) = -m.c(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)]));
  }
  rhs(k) = demand;
  const Eigen::VectorXd x = K.completeOrthogonalDecomposition().solve(rhs);
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff() + K.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff();
  if ((K * x - rhs).cwiseAbs().maxCoeff() > kKktTol * scale) return std::nullopt;
  return std::make_pair(Eigen::VectorXd(x.head(k)), x(k));
}

FlowAssignment assemble(const RoutedNetwork& net, const std::vector<AffineLatency>& lat,
                        std::vector<double> q) {
  FlowAssignment out;
  for (double& x : q) {
    if (x < 0.0) x = 0.0;
  }
  out.route_flows = std::move(q);
  out.edge_loads.assign(net.edges().size(), 0.0);
  for (std::size_t r = 0; r < net.routes().size(); ++r) {
    for (EdgeIndex e : net.routes()[r].edges) out.edge_loads[e] += out.route_flows[r];
  }
  for (const Route& route : net.routes()) {
    double cost = 0.0;
    for (EdgeIndex e : route.edges) cost += lat[e](out.edge_loads[e]);
    out.route_costs.push_back(cost);
  }
  return out;
}

// KKT check for a candidate support solution over all routes.
bool is_equilibrium(const Costs& m, const std::vector<std::size_t>& support, const Eigen::VectorXd& qs,
                    double lambda, std::vector<double>& q) {
  const std::size_t R = static_cast<std::size_t>(m.c.size());
  q.assign(R, 0.0);
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (qs(static_cast<Eigen::Index>(a)) < -kFlowTol) return false;
    q[support[a]] = qs(static_cast<Eigen::Index>(a));
  }
  Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(R));
  const Eigen::VectorXd cost = m.M * qv + m.c;
  const double tol = kKktTol * (1.0 + std::abs(lambda));
  for (std::size_t r = 0; r < R; ++r) {
    if (cost(static_cast<Eigen::Index>(r)) < lambda - tol) return false;
  }
  return true;
}

}  // namespace

RoutedNetwork::RoutedNetwork(std::vector<Edge> edges, std::vector<Route> routes, double demand)
    : edges_(std::move(edges)), routes_(std::move(routes)), demand_(demand) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, what); };
  if (edges_.empty()) fail("network needs at least one edge");
  if (routes_.empty()) fail("network needs at least one route");
  if (!(demand_ >= 0.0) || !std::isfinite(demand_)) fail("demand must be finite and nonnegative");
  std::set<std::string> seen;
  for (const Edge& e : edges_) {
    if (!seen.insert(e.id).second) fail("duplicate edge '" + e.id + "'");
    for (const AffineLatency* l : {&e.nominal, &e.compromised}) {
      if (!(l->slope >= 0.0 && l->intercept >= 0.0) || !std::isfinite(l->slope) ||
          !std::isfinite(l->intercept)) {
        fail("edge '" + e.id + "' needs finite nonnegative latency coefficients");
      }
    }
    // Affine, so dominance on [0, D] reduces to the two end points.
    if (e.compromised(0.0) < e.nominal(0.0) || e.compromised(demand_) < e.nominal(demand_)) {
      fail("compromised latency of edge '" + e.id + "' drops below nominal on [0, demand]");
    }
  }
  std::set<std::string> route_ids;
  for (const Route& r : routes_) {
    if (!route_ids.insert(r.id).second) fail("duplicate route '" + r.id + "'");
    if (r.edges.empty()) fail("route '" + r.id + "' has no edges");
    std::set<EdgeIndex> used;
    for (EdgeIndex e : r.edges) {
      if (e >= edges_.size()) fail("route '" + r.id + "' references an unknown edge");
      if (!used.insert(e).second) fail("route '" + r.id + "' repeats an edge");
    }
  }
}

std::optional<EdgeIndex> RoutedNetwork::find_edge(const std::string& id) const {
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id == id) return e;
  }
  return std::nullopt;
}

std::vector<AffineLatency> RoutedNetwork::latencies_for_state(std::optional<EdgeIndex> compromised) const {
  std::vector<AffineLatency> out;
  out.reserve(edges_.size());
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    out.push_back(compromised && *compromised == e ? edges_[e].compromised : edges_[e].nominal);
  }
  return out;
}

FlowAssignment wardrop_equilibrium(const RoutedNetwork& network,
                                   const std::vector<AffineLatency>& latencies) {
  if (latencies.size() != network.edges().size()) {
    throw Error(ErrorKind::InvalidInput, "one latency per edge is required");
  }
  for (const AffineLatency& l : latencies) {
    if (!(l.slope >= 0.0) || !std::isfinite(l.intercept)) {
      throw Error(ErrorKind::InvalidInput, "latencies must have nonnegative slopes");
    }
  }
  const std::size_t R = network.routes().size();
  const double D = network.demand();
  if (D == 0.0) return assemble(network, latencies, std::vector<double>(R, 0.0));

  const Costs m = route_costs_model(network, latencies);
  std::vector<std::size_t> support(R);
  for (std::size_t r = 0; r < R; ++r) support[r] = r;

  // Active set: drop the most negative route, add back the cheapest route
  // priced below the common cost.
  std::vector<double> q;
  for (std::size_t iter = 0; iter < 4 * R + 8; ++iter) {
    const auto sol = solve_support(m, support, D);
    if (!sol) break;
    const auto& [qs, lambda] = *sol;
    Eigen::Index worst = 0;
    if (qs.minCoeff(&worst) < -kFlowTol) {
      support.erase(support.begin() + worst);
      continue;
    }
    if (is_equilibrium(m, support, qs, lambda, q)) return assemble(network, latencies, q);
    Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(R));
    const Eigen::VectorXd cost = m.M * qv + m.c;
    std::size_t add = R;
    for (std::size_t r = 0; r < R; ++r) {
      if (std::find(support.begin(), support.end(), r) != support.end()) continue;
      if (add == R || cost(static_cast<Eigen::Index>(r)) < cost(static_cast<Eigen::Index>(add))) add = r;
    }
    if (add == R) break;
    support.insert(std::upper_bound(support.begin(), support.end(), add), add);
  }

  // Fallback: try every support, largest first.
  if (R > 24) throw Error(ErrorKind::InternalInconsistency, "Wardrop active set did not settle");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << R); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) > __builtin_popcount(b);
  });
  for (std::uint32_t mask : masks) {
    support.clear();
    for (std::size_t r = 0; r < R; ++r) {
      if (mask & (1u << r)) support.push_back(r);
    }
    const auto sol = solve_support(m, support, D);
    if (sol && is_equilibrium(m, support, sol->first, sol->second, q)) {
      return assemble(network, latencies, q);
    }
  }
  throw Error(ErrorKind::InternalInconsistency, "no Wardrop equilibrium found");
}

double wardrop_violation(const FlowAssignment& flows, double used_tol) {
  const double cheapest = *std::min_element(flows.route_costs.begin(), flows.route_costs.end());
  double worst = 0.0;
  for (std::size_t r = 0; r < flows.route_flows.size(); ++r) {
    if (flows.route_flows[r] > used_tol) worst = std::max(worst, flows.route_costs[r] - cheapest);
  }
  return worst;
}

double beckmann_potential(const RoutedNetwork& network, const std::vector<AffineLatency>& latencies,
                          const std::vector<double>& route_flows) {
  std::vector<double> w(network.edges().size(), 0.0);
  for (std::size_t r = 0; r < network.routes().size(); ++r) {
    for (EdgeIndex e : network.routes()[r].edges) w[e] += route_flows.at(r);
  }
  double phi = 0.0;
  for (EdgeIndex e = 0; e < w.size(); ++e) {
    phi += 0.5 * latencies[e].slope * w[e] * w[e] + latencies[e].intercept * w[e];
  }
  return phi;
}

double usage_cost_for_state(const RoutedNetwork& network, std::optional<EdgeIndex> compromised) {
  const FlowAssignment f = wardrop_equilibrium(network, network.latencies_for_state(compromised));
  const double D = network.demand();
  if (D == 0.0) return *std::min_element(f.route_costs.begin(), f.route_costs.end());
  double total = 0.0;
  for (std::size_t r = 0; r < f.route_flows.size(); ++r) total += f.route_flows[r] * f.route_costs[r];
  return total / D;
}

model::FacilityProfile profile_from_network(const RoutedNetwork& network) {
  std::vector<std::string> ids;
  std::vector<double> post;
  for (EdgeIndex e = 0; e < network.edges().size(); ++e) {
    ids.push_back(network.edges()[e].id);
    post.push_back(usage_cost_for_state(network, e));
  }
  return model::FacilityProfile(std::move(ids), usage_cost_for_state(network, std::nullopt),
                                std::move(post));
}

}  // namespace secgame::routing
