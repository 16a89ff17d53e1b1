#include "oracles.hpp"

#include <algorithm>
#include <limits>

namespace ngev::testing {

namespace {

void walk_simple_paths(const Graph& graph, std::span<const double> costs, NodeId node,
                       NodeId destination, std::vector<bool>& visited, double cost_so_far,
                       std::vector<LinkId>& stack,
                       const std::function<void(double, const std::vector<LinkId>&)>& emit) {
  if (node == destination) {
    emit(cost_so_far, stack);
    return;
  }
  visited[static_cast<std::size_t>(node)] = true;
  for (LinkId l : graph.out_links(node)) {
    const NodeId next = graph.link(l).head;
    if (visited[static_cast<std::size_t>(next)]) continue;
    stack.push_back(l);
    walk_simple_paths(graph, costs, next, destination, visited,
                      cost_so_far + costs[static_cast<std::size_t>(l)], stack, emit);
    stack.pop_back();
  }
  visited[static_cast<std::size_t>(node)] = false;
}

}  // namespace

double brute_force_sp(const Network& network, std::span<const double> costs, NodeId origin,
                      NodeId destination) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> visited(static_cast<std::size_t>(network.node_count()), false);
  std::vector<LinkId> stack;
  walk_simple_paths(network.graph, costs, origin, destination, visited, 0.0, stack,
                    [&](double c, const std::vector<LinkId>&) { best = std::min(best, c); });
  return best;
}

std::vector<double> enumerate_simple_path_costs(const Network& network,
                                                std::span<const double> costs, NodeId origin,
                                                NodeId destination) {
  std::vector<double> out;
  std::vector<bool> visited(static_cast<std::size_t>(network.node_count()), false);
  std::vector<LinkId> stack;
  walk_simple_paths(network.graph, costs, origin, destination, visited, 0.0, stack,
                    [&](double c, const std::vector<LinkId>&) { out.push_back(c); });
  return out;
}

std::vector<double> logit_path_flows(const Network& network, std::span<const double> costs,
                                     double theta, NodeId origin, NodeId destination,
                                     double od_flow) {
  struct PathRecord {
    double cost;
    std::vector<LinkId> links;
  };
  std::vector<PathRecord> paths;
  std::vector<bool> visited(static_cast<std::size_t>(network.node_count()), false);
  std::vector<LinkId> stack;
  walk_simple_paths(network.graph, costs, origin, destination, visited, 0.0, stack,
                    [&](double c, const std::vector<LinkId>& links) {
                      paths.push_back({c, links});
                    });
  double min_cost = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) min_cost = std::min(min_cost, p.cost);
  double denom = 0.0;
  for (const auto& p : paths) denom += std::exp(-theta * (p.cost - min_cost));
  std::vector<double> flows(static_cast<std::size_t>(network.link_count()), 0.0);
  for (const auto& p : paths) {
    const double prob = std::exp(-theta * (p.cost - min_cost)) / denom;
    for (LinkId l : p.links) flows[static_cast<std::size_t>(l)] += od_flow * prob;
  }
  return flows;
}

std::vector<double> power_series_mu(const Network& network, std::span<const double> costs,
                                    const Algebra& algebra, NodeId destination, int terms) {
  const Graph& graph = network.graph;
  const auto n = static_cast<std::size_t>(graph.node_count());
  // u_m = W^(x)m (x) e^d, acc = (+) over m of u_m, all with node-indexed ops.
  std::vector<double> u(n, kInfinity);
  u[static_cast<std::size_t>(destination)] = 0.0;
  std::vector<double> acc = u;
  std::vector<double> next(n);
  for (int m = 1; m <= terms; ++m) {
    for (NodeId i = 0; i < graph.node_count(); ++i) {
      // The destination is absorbing: its row of W is all zero elements.
      if (i == destination) {
        next[static_cast<std::size_t>(i)] = kInfinity;
        continue;
      }
      double row = kInfinity;
      for (LinkId l : graph.out_links(i)) {
        const double w = algebra.link_weight(l, i, costs[static_cast<std::size_t>(l)]);
        row = algebra.oplus(i, row,
                            Algebra::otimes(w, u[static_cast<std::size_t>(graph.link(l).head)]));
      }
      next[static_cast<std::size_t>(i)] = row;
    }
    u = next;
    for (NodeId i = 0; i < graph.node_count(); ++i) {
      acc[static_cast<std::size_t>(i)] =
          algebra.oplus(i, acc[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(i)]);
    }
  }
  return acc;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double total = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    total += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return total * h / 3.0;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace ngev::testing
