#include "ngev/network.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ngev/errors.hpp"

namespace ngev {

Network::Network(Graph g, std::vector<double> free_flow, std::vector<double> cap,
                 std::vector<int> external_ids)
    : graph(std::move(g)),
      free_flow_cost(std::move(free_flow)),
      capacity(std::move(cap)),
      external_node_id(std::move(external_ids)) {
  const auto links = static_cast<std::size_t>(graph.link_count());
  if (free_flow_cost.size() != links || capacity.size() != links) {
    fail(ErrorCategory::structural, "link attribute size mismatch");
  }
  for (std::size_t l = 0; l < links; ++l) {
    if (!(free_flow_cost[l] > 0.0) || !std::isfinite(free_flow_cost[l])) {
      fail(ErrorCategory::validation,
           "free-flow cost of link " + std::to_string(l) + " must be positive");
    }
    if (!(capacity[l] > 0.0) || !std::isfinite(capacity[l])) {
      fail(ErrorCategory::validation,
           "capacity of link " + std::to_string(l) + " must be positive");
    }
  }
  if (external_node_id.empty()) {
    external_node_id.resize(static_cast<std::size_t>(graph.node_count()));
    std::iota(external_node_id.begin(), external_node_id.end(), 1);
  } else if (external_node_id.size() != static_cast<std::size_t>(graph.node_count())) {
    fail(ErrorCategory::structural, "external node id table size mismatch");
  }
}

void DemandTable::add(NodeId origin, NodeId destination, double flow) {
  if (origin < 0 || origin >= node_count_ || destination < 0 || destination >= node_count_) {
    fail(ErrorCategory::structural, "demand references unknown node");
  }
  if (!(flow >= 0.0) || !std::isfinite(flow)) {
    fail(ErrorCategory::validation, "demand flow must be non-negative");
  }
  ++od_entries_;
  if (flow == 0.0) return;
  if (origin == destination) {
    fail(ErrorCategory::validation,
         "positive demand on self pair at node " + std::to_string(origin));
  }
  auto [it, inserted] = by_destination_.try_emplace(
      destination, static_cast<std::size_t>(node_count_), 0.0);
  if (it->second[static_cast<std::size_t>(origin)] == 0.0) ++positive_pairs_;
  it->second[static_cast<std::size_t>(origin)] += flow;
  total_flow_ += flow;
}

std::vector<NodeId> DemandTable::destinations() const {
  std::vector<NodeId> out;
  out.reserve(by_destination_.size());
  for (const auto& [d, _] : by_destination_) out.push_back(d);
  return out;
}

const std::vector<double>& DemandTable::demand(NodeId d) const {
  auto it = by_destination_.find(d);
  if (it == by_destination_.end()) {
    fail(ErrorCategory::structural, "no demand toward node " + std::to_string(d));
  }
  return it->second;
}

std::vector<double> DemandTable::modified_demand(NodeId d) const {
  std::vector<double> q = demand(d);
  double total = 0.0;
  for (double v : q) total += v;
  q[static_cast<std::size_t>(d)] = -total;
  return q;
}

std::vector<NodeId> DemandTable::origins(NodeId d) const {
  std::vector<NodeId> out;
  const auto& q = demand(d);
  for (NodeId i = 0; i < node_count_; ++i) {
    if (q[static_cast<std::size_t>(i)] > 0.0) out.push_back(i);
  }
  return out;
}

double DemandTable::destination_total(NodeId d) const {
  const auto& q = demand(d);
  double total = 0.0;
  for (double v : q) total += v;
  return total;
}

DemandTable DemandTable::scaled(double multiplier) const {
  if (!(multiplier >= 0.0) || !std::isfinite(multiplier)) {
    fail(ErrorCategory::validation, "demand multiplier must be non-negative");
  }
  DemandTable out(node_count_);
  for (const auto& [d, q] : by_destination_) {
    for (NodeId o = 0; o < node_count_; ++o) {
      const double f = q[static_cast<std::size_t>(o)];
      if (f > 0.0) out.add(o, d, f * multiplier);
    }
  }
  return out;
}

}  // namespace ngev
