#include "ngev/loading.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "ngev/shortest_path.hpp"

namespace ngev {

namespace {

constexpr double kStructuralZero = 1e-303;

std::vector<NodeId> nodes_by_descending(const std::vector<double>& key, NodeId n) {
  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    if (std::isfinite(key[static_cast<std::size_t>(i)])) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const double ka = key[static_cast<std::size_t>(a)];
    const double kb = key[static_cast<std::size_t>(b)];
    if (ka != kb) return ka > kb;
    return a < b;
  });
  return order;
}

}  // namespace

LoadingMethod parse_loading_method(const std::string& name) {
  if (name == "mta") return LoadingMethod::mta;
  if (name == "dial") return LoadingMethod::dial;
  fail(ErrorCategory::config, "unknown loading method '" + name + "'");
}

const char* to_string(LoadingMethod method) {
  return method == LoadingMethod::mta ? "mta" : "dial";
}

std::vector<double> choice_probabilities(const Network& network, std::span<const double> costs,
                                         const Algebra& algebra, const std::vector<double>& mu,
                                         NodeId destination,
                                         const std::vector<std::uint8_t>* link_enabled) {
  const Graph& graph = network.graph;
  std::vector<double> p(static_cast<std::size_t>(graph.link_count()), 0.0);
  if (!algebra.is_stochastic()) {
    fail(ErrorCategory::config, "choice probabilities need a stochastic algebra");
  }
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (i == destination) continue;
    const double mi = mu[static_cast<std::size_t>(i)];
    if (!std::isfinite(mi)) continue;
    const double theta = algebra.node_theta(i);
    double sum = 0.0;
    for (LinkId l : graph.out_links(i)) {
      if (link_enabled && !(*link_enabled)[static_cast<std::size_t>(l)]) continue;
      const double a = algebra.alpha(l);
      if (a <= 0.0) continue;
      const double mj = mu[static_cast<std::size_t>(graph.link(l).head)];
      if (!std::isfinite(mj)) continue;
      double value =
          a * std::exp(-theta * (costs[static_cast<std::size_t>(l)] + mj - mi));
      if (value < kStructuralZero) value = 0.0;
      p[static_cast<std::size_t>(l)] = value;
      sum += value;
    }
    // mu solves the fixed point, so sum is already 1 up to solver tolerance;
    // normalize the remainder away to keep the chain exactly stochastic.
    if (sum > 0.0) {
      for (LinkId l : graph.out_links(i)) {
        p[static_cast<std::size_t>(l)] /= sum;
      }
    }
  }
  return p;
}

std::vector<double> solve_node_flows(const Network& network, const std::vector<double>& prob,
                                     std::span<const double> demand, NodeId destination,
                                     const std::vector<double>& mu,
                                     const NodeFlowOptions& options) {
  const Graph& graph = network.graph;
  const NodeId n = graph.node_count();
  if (demand.size() != static_cast<std::size_t>(n)) {
    fail(ErrorCategory::validation, "demand vector size mismatch");
  }
  double demand_norm = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const double q = demand[static_cast<std::size_t>(i)];
    if (q < 0.0) fail(ErrorCategory::validation, "negative demand");
    if (q > 0.0 && !std::isfinite(mu[static_cast<std::size_t>(i)])) {
      fail(ErrorCategory::unreachable,
           "demand at node " + std::to_string(i) + " cannot reach destination " +
               std::to_string(destination));
    }
    demand_norm += q;
  }
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  if (demand_norm == 0.0) return z;

  // Sweep far-from-destination nodes first: inflows mostly come from
  // already-updated upstream nodes, cycles settle geometrically.
  const auto order = nodes_by_descending(mu, n);
  for (NodeId i : order) z[static_cast<std::size_t>(i)] = demand[static_cast<std::size_t>(i)];

  const double tol = options.relative_tol * demand_norm;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double change = 0.0;
    for (NodeId i : order) {
      double inflow = demand[static_cast<std::size_t>(i)];
      for (LinkId l : graph.in_links(i)) {
        const double pl = prob[static_cast<std::size_t>(l)];
        if (pl <= 0.0) continue;
        inflow += pl * z[static_cast<std::size_t>(graph.link(l).tail)];
      }
      change = std::max(change, std::abs(inflow - z[static_cast<std::size_t>(i)]));
      z[static_cast<std::size_t>(i)] = inflow;
    }
    if (change <= tol) {
      // One verification pass: the residual must hold simultaneously.
      double residual = 0.0;
      for (NodeId i : order) {
        double inflow = demand[static_cast<std::size_t>(i)];
        for (LinkId l : graph.in_links(i)) {
          const double pl = prob[static_cast<std::size_t>(l)];
          if (pl <= 0.0) continue;
          inflow += pl * z[static_cast<std::size_t>(graph.link(l).tail)];
        }
        residual = std::max(residual, std::abs(inflow - z[static_cast<std::size_t>(i)]));
      }
      if (residual <= tol) return z;
    }
  }
  fail(ErrorCategory::divergence, "node-flow iteration did not converge");
}

CommodityLoad load_commodity(const Network& network, std::span<const double> costs,
                             const Commodity& commodity, LoadingMethod method,
                             const std::vector<double>* warm_mu) {
  const Graph& graph = network.graph;
  CommodityLoad out;

  if (!commodity.algebra.is_stochastic()) {
    // Deterministic all-or-nothing assignment on the shortest-path tree.
    out.mu = sp_distances_to(graph, costs, commodity.destination);
    for (NodeId i = 0; i < graph.node_count(); ++i) {
      if (commodity.demand[static_cast<std::size_t>(i)] > 0.0 &&
          !std::isfinite(out.mu[static_cast<std::size_t>(i)])) {
        fail(ErrorCategory::unreachable,
             "demand at node " + std::to_string(i) + " cannot reach destination " +
                 std::to_string(commodity.destination));
      }
    }
    out.link_flows = all_or_nothing(graph, costs, commodity.demand, commodity.destination);
    return out;
  }

  std::vector<std::uint8_t> enabled;
  const std::vector<std::uint8_t>* mask = nullptr;
  if (method == LoadingMethod::dial) {
    // Efficient links strictly descend toward the destination; ties count
    // as non-improving and are excluded.
    const auto dist = sp_distances_to(graph, costs, commodity.destination);
    enabled.assign(static_cast<std::size_t>(graph.link_count()), 0);
    for (LinkId l = 0; l < graph.link_count(); ++l) {
      const Link& e = graph.link(l);
      const double dt = dist[static_cast<std::size_t>(e.tail)];
      const double dh = dist[static_cast<std::size_t>(e.head)];
      if (std::isfinite(dt) && std::isfinite(dh) && dh < dt) {
        enabled[static_cast<std::size_t>(l)] = 1;
      }
    }
    mask = &enabled;
  }

  MuSolveOptions mu_options;
  mu_options.warm_start = (method == LoadingMethod::mta) ? warm_mu : nullptr;
  auto solved = expected_min_cost(network, costs, commodity.algebra, commodity.destination,
                                  mu_options, mask);
  out.mu = std::move(solved.mu);
  out.probabilities = choice_probabilities(network, costs, commodity.algebra, out.mu,
                                           commodity.destination, mask);
  const auto z = solve_node_flows(network, out.probabilities, commodity.demand,
                                  commodity.destination, out.mu);
  out.link_flows.assign(static_cast<std::size_t>(graph.link_count()), 0.0);
  for (LinkId l = 0; l < graph.link_count(); ++l) {
    const double pl = out.probabilities[static_cast<std::size_t>(l)];
    if (pl <= 0.0) continue;
    out.link_flows[static_cast<std::size_t>(l)] =
        pl * z[static_cast<std::size_t>(graph.link(l).tail)];
  }
  return out;
}

FlowState assign_all(const Network& network, std::span<const double> costs,
                     std::span<const Commodity> commodities, LoadingMethod method,
                     LoadContext* context) {
  FlowState state;
  state.aggregate.assign(static_cast<std::size_t>(network.link_count()), 0.0);
  state.per_commodity.reserve(commodities.size());
  if (context && context->mu.size() != commodities.size()) {
    context->mu.assign(commodities.size(), {});
  }
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    const std::vector<double>* warm =
        (context && !context->mu[c].empty()) ? &context->mu[c] : nullptr;
    auto loaded = load_commodity(network, costs, commodities[c], method, warm);
    for (std::size_t l = 0; l < loaded.link_flows.size(); ++l) {
      state.aggregate[l] += loaded.link_flows[l];
    }
    if (context) context->mu[c] = std::move(loaded.mu);
    state.per_commodity.push_back(std::move(loaded.link_flows));
  }
  return state;
}

double conservation_residual(const Network& network, const std::vector<double>& link_flows,
                             const Commodity& commodity) {
  const Graph& graph = network.graph;
  const auto q = commodity.modified_demand();
  double worst = 0.0;
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    double balance = -q[static_cast<std::size_t>(i)];
    for (LinkId l : graph.out_links(i)) balance += link_flows[static_cast<std::size_t>(l)];
    for (LinkId l : graph.in_links(i)) balance -= link_flows[static_cast<std::size_t>(l)];
    worst = std::max(worst, std::abs(balance));
  }
  return worst;
}

namespace {

struct EnumFrame {
  NodeId node;
  double probability;
};

void enumerate_recursive(const Graph& graph, const std::vector<double>& prob,
                         NodeId destination, int max_loops, std::size_t path_cap,
                         NodeId node, double probability, std::vector<int>& visits,
                         std::vector<int>& link_uses, int depth, PathEnumResult& result,
                         double od_flow) {
  if (node == destination) {
    result.enumerated_mass += probability;
    ++result.path_count;
    if (result.path_count > path_cap) {
      fail(ErrorCategory::infeasible, "route enumeration exceeded the path budget");
    }
    result.max_path_length = std::max(result.max_path_length, depth);
    for (std::size_t l = 0; l < link_uses.size(); ++l) {
      if (link_uses[l] > 0) result.link_flows[l] += od_flow * probability * link_uses[l];
    }
    return;
  }
  for (LinkId l : graph.out_links(node)) {
    const double pl = prob[static_cast<std::size_t>(l)];
    if (pl <= 0.0) continue;
    const NodeId next = graph.link(l).head;
    if (visits[static_cast<std::size_t>(next)] > max_loops) continue;
    ++visits[static_cast<std::size_t>(next)];
    ++link_uses[static_cast<std::size_t>(l)];
    enumerate_recursive(graph, prob, destination, max_loops, path_cap, next,
                        probability * pl, visits, link_uses, depth + 1, result, od_flow);
    --link_uses[static_cast<std::size_t>(l)];
    --visits[static_cast<std::size_t>(next)];
  }
}

}  // namespace

PathEnumResult enumerate_path_flows(const Network& network, std::span<const double> costs,
                                    const Algebra& algebra, NodeId origin, NodeId destination,
                                    double od_flow, int max_loops, std::size_t path_cap) {
  if (max_loops < 0) fail(ErrorCategory::validation, "max_loops must be non-negative");
  const auto mu = expected_min_cost(network, costs, algebra, destination,
                                    MuSolveOptions{.tol = 1e-13, .max_sweeps = 100000});
  const auto prob =
      choice_probabilities(network, costs, algebra, mu.mu, destination);

  PathEnumResult result;
  result.link_flows.assign(static_cast<std::size_t>(network.link_count()), 0.0);
  std::vector<int> visits(static_cast<std::size_t>(network.node_count()), 0);
  std::vector<int> link_uses(static_cast<std::size_t>(network.link_count()), 0);
  visits[static_cast<std::size_t>(origin)] = 1;
  enumerate_recursive(network.graph, prob, destination, max_loops, path_cap, origin, 1.0,
                      visits, link_uses, 0, result, od_flow);
  result.truncated_mass = std::max(0.0, 1.0 - result.enumerated_mass);
  return result;
}

PathSampleStats sample_paths(const Network& network, const std::vector<double>& prob,
                             NodeId origin, NodeId destination, std::size_t samples,
                             std::uint64_t seed, std::size_t max_steps) {
  const Graph& graph = network.graph;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  PathSampleStats stats;
  std::set<std::vector<LinkId>> unique;
  std::vector<std::size_t> visit_count(static_cast<std::size_t>(graph.node_count()));

  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<LinkId> path;
    std::fill(visit_count.begin(), visit_count.end(), 0);
    NodeId node = origin;
    bool cyclic = false;
    bool arrived = false;
    for (std::size_t step = 0; step < max_steps; ++step) {
      if (node == destination) {
        arrived = true;
        break;
      }
      if (++visit_count[static_cast<std::size_t>(node)] > 1) cyclic = true;
      double u = uniform(rng);
      LinkId chosen = kNoLink;
      for (LinkId l : graph.out_links(node)) {
        const double pl = prob[static_cast<std::size_t>(l)];
        if (pl <= 0.0) continue;
        chosen = l;
        if (u <= pl) break;
        u -= pl;
      }
      if (chosen == kNoLink) break;  // absorbing dead end; cannot happen with valid prob
      path.push_back(chosen);
      node = graph.link(chosen).head;
    }
    ++stats.sampled;
    if (!arrived) {
      ++stats.truncated;
      continue;
    }
    if (cyclic) ++stats.cyclic_paths;
    unique.insert(std::move(path));
  }
  stats.unique_paths = unique.size();
  return stats;
}

}  // namespace ngev
