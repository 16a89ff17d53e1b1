#pragma once

#include <random>
#include <string>
#include <vector>

#include "ngev/grid.hpp"
#include "ngev/models.hpp"
#include "ngev/tntp.hpp"

namespace ngev::testing {

inline std::string data_path(const std::string& name) {
  return std::string(NGEV_TEST_DATA_DIR) + "/" + name;
}

inline TntpInstance sioux_falls() {
  return load_tntp_files(data_path("siouxfalls_net.tntp"), data_path("siouxfalls_trips.tntp"));
}

/// The 9-node cyclic loading example: single OD pair 1 -> 9, unit flow,
/// cycles 5-8-5 and 5-6-5.
inline TntpInstance cyclic9() {
  return load_tntp_files(data_path("cyclic9_net.tntp"), data_path("cyclic9_trips.tntp"));
}

inline Network make_network(NodeId nodes, std::vector<Link> links, std::vector<double> costs,
                            double capacity = 1.0) {
  std::vector<double> cap(costs.size(), capacity);
  return Network(Graph(nodes, std::move(links)), std::move(costs), std::move(cap));
}

/// o=0 splits over a=1 / b=2 toward d=3; `gap` is added to the b route.
inline Network two_route(double gap = 0.0, double capacity = 1.0) {
  return make_network(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}},
                      {0.5, 0.5 + gap, 0.5, 0.5}, capacity);
}

/// Small asymmetric network for gradient checks: extra cross link 1 -> 2.
inline Network four_node(double capacity = 2.0) {
  return make_network(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}},
                      {1.0, 1.2, 0.5, 0.8, 1.0}, capacity);
}

inline DemandTable single_od(NodeId nodes, NodeId origin, NodeId destination, double flow) {
  DemandTable demand(nodes);
  demand.add(origin, destination, flow);
  return demand;
}

struct RandomNet {
  Network network;
  NodeId origin = 0;
  NodeId destination = 0;
};

/// Random banded DAG on `n` nodes: edges i -> j only for 0 < j - i <= band,
/// a guaranteed route from every node to n-1, costs in [0.5, 2]. The
/// locality keeps route counts (and hence cycle gains, once back edges are
/// added) moderate, like a road network.
inline RandomNet random_dag(std::mt19937_64& rng, int n, double edge_prob = 0.55,
                            int band = 3) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> cost_dist(0.5, 2.0);
  std::vector<Link> links;
  for (NodeId i = 0; i < n; ++i) {
    bool has_out = false;
    for (NodeId j = i + 1; j < std::min<NodeId>(n, i + band + 1); ++j) {
      if (u01(rng) < edge_prob) {
        links.push_back({i, j});
        has_out = true;
      }
    }
    if (!has_out && i + 1 < n) links.push_back({i, static_cast<NodeId>(i + 1)});
  }
  std::vector<double> costs(links.size());
  for (auto& c : costs) c = cost_dist(rng);
  RandomNet out;
  out.network = make_network(static_cast<NodeId>(n), std::move(links), std::move(costs));
  out.origin = 0;
  out.destination = static_cast<NodeId>(n - 1);
  return out;
}

/// DAG plus a few reverse links, keeping all cycles strictly costly.
inline RandomNet random_cyclic(std::mt19937_64& rng, int n, int back_edges = 3) {
  RandomNet net = random_dag(rng, n);
  std::vector<Link> links(net.network.graph.links().begin(), net.network.graph.links().end());
  std::vector<double> costs = net.network.free_flow_cost;
  std::uniform_int_distribution<NodeId> node_dist(0, static_cast<NodeId>(n - 1));
  std::uniform_real_distribution<double> cost_dist(1.5, 2.5);
  int added = 0;
  for (int attempt = 0; attempt < 100 && added < back_edges; ++attempt) {
    NodeId a = node_dist(rng), b = node_dist(rng);
    if (a <= b) continue;  // reverse direction only
    if (b == net.destination) continue;
    bool exists = false;
    for (const Link& l : links) {
      if (l.tail == a && l.head == b) exists = true;
    }
    if (exists) continue;
    links.push_back({a, b});
    costs.push_back(cost_dist(rng));
    ++added;
  }
  net.network = make_network(static_cast<NodeId>(n), std::move(links), std::move(costs));
  return net;
}

inline Commodity make_commodity(const Network& network, const DemandTable& demand,
                                const ModelSpec& spec, std::size_t index = 0) {
  auto commodities = plan_commodities(network, demand, spec);
  return commodities.at(index);
}

}  // namespace ngev::testing
