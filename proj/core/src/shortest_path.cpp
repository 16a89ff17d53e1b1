#include "ngev/shortest_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "ngev/errors.hpp"

namespace ngev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_costs(const Graph& graph, std::span<const double> costs) {
  if (costs.size() != static_cast<std::size_t>(graph.link_count())) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  for (std::size_t l = 0; l < costs.size(); ++l) {
    if (!(costs[l] > 0.0) || !std::isfinite(costs[l])) {
      fail(ErrorCategory::validation,
           "link cost " + std::to_string(l) + " must be positive");
    }
  }
}

}  // namespace

std::vector<double> sp_distances_to(const Graph& graph, std::span<const double> costs,
                                    NodeId destination,
                                    const std::vector<std::uint8_t>* link_enabled) {
  check_costs(graph, costs);
  if (destination < 0 || destination >= graph.node_count()) {
    fail(ErrorCategory::structural, "destination out of range");
  }
  std::vector<double> dist(static_cast<std::size_t>(graph.node_count()), kInf);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[static_cast<std::size_t>(destination)] = 0.0;
  heap.emplace(0.0, destination);
  while (!heap.empty()) {
    const auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(i)]) continue;
    for (LinkId l : graph.in_links(i)) {
      if (link_enabled && !(*link_enabled)[static_cast<std::size_t>(l)]) continue;
      const NodeId tail = graph.link(l).tail;
      const double cand = d + costs[static_cast<std::size_t>(l)];
      if (cand < dist[static_cast<std::size_t>(tail)]) {
        dist[static_cast<std::size_t>(tail)] = cand;
        heap.emplace(cand, tail);
      }
    }
  }
  return dist;
}

std::vector<std::vector<double>> sp_distance_table(const Network& network,
                                                   std::span<const double> costs,
                                                   std::span<const NodeId> destinations) {
  std::vector<std::vector<double>> table;
  table.reserve(destinations.size());
  for (NodeId d : destinations) table.push_back(sp_distances_to(network.graph, costs, d));
  return table;
}

SpTree sp_tree_to(const Graph& graph, std::span<const double> costs, NodeId destination) {
  SpTree tree;
  tree.distance = sp_distances_to(graph, costs, destination);
  tree.tree_link.assign(static_cast<std::size_t>(graph.node_count()), kNoLink);
  // Distances are final; pick per node the lowest link id attaining them so
  // ties do not depend on heap pop order.
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (i == destination || !std::isfinite(tree.distance[static_cast<std::size_t>(i)])) continue;
    for (LinkId l : graph.out_links(i)) {
      const NodeId head = graph.link(l).head;
      const double through = costs[static_cast<std::size_t>(l)] +
                             tree.distance[static_cast<std::size_t>(head)];
      if (through == tree.distance[static_cast<std::size_t>(i)]) {
        tree.tree_link[static_cast<std::size_t>(i)] = l;
        break;
      }
    }
  }
  return tree;
}

std::vector<double> all_or_nothing(const Graph& graph, std::span<const double> costs,
                                   std::span<const double> demand, NodeId destination) {
  const SpTree tree = sp_tree_to(graph, costs, destination);
  std::vector<double> node_flow(demand.begin(), demand.end());
  std::vector<double> link_flow(static_cast<std::size_t>(graph.link_count()), 0.0);

  std::vector<NodeId> order(static_cast<std::size_t>(graph.node_count()));
  for (NodeId i = 0; i < graph.node_count(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const double da = tree.distance[static_cast<std::size_t>(a)];
    const double db = tree.distance[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  });

  for (NodeId i : order) {
    const double flow = node_flow[static_cast<std::size_t>(i)];
    if (flow <= 0.0) continue;
    if (i == destination) continue;
    const LinkId l = tree.tree_link[static_cast<std::size_t>(i)];
    if (l == kNoLink) {
      fail(ErrorCategory::unreachable,
           "demand at node " + std::to_string(i) + " cannot reach destination " +
               std::to_string(destination));
    }
    link_flow[static_cast<std::size_t>(l)] += flow;
    node_flow[static_cast<std::size_t>(graph.link(l).head)] += flow;
  }
  return link_flow;
}

}  // namespace ngev
