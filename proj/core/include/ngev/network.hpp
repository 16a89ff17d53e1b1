#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ngev/graph.hpp"

namespace ngev {

/// A physical road network: topology plus per-link free-flow cost and
/// nominal capacity, both strictly positive. External (1-based) node ids
/// are kept for input/output; internally everything is dense and 0-based.
struct Network {
  Graph graph;
  std::vector<double> free_flow_cost;
  std::vector<double> capacity;
  std::vector<int> external_node_id;

  Network() = default;
  Network(Graph g, std::vector<double> free_flow, std::vector<double> cap,
          std::vector<int> external_ids = {});

  NodeId node_count() const noexcept { return graph.node_count(); }
  LinkId link_count() const noexcept { return graph.link_count(); }

  int external_id(NodeId i) const { return external_node_id[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Destination-indexed demand: for each destination d a node vector q^d
/// with q^d_d = 0. The modified vector q~^d closes the balance at d so
/// that it sums to zero. Entries parsed or generated with zero flow are
/// counted (they contribute to the OD pair tally) but carry no demand.
class DemandTable {
 public:
  DemandTable() = default;
  explicit DemandTable(NodeId node_count) : node_count_(node_count) {}

  NodeId node_count() const noexcept { return node_count_; }

  /// Records demand of `flow` from `origin` toward `destination`.
  void add(NodeId origin, NodeId destination, double flow);

  std::vector<NodeId> destinations() const;
  bool has_destination(NodeId d) const { return by_destination_.count(d) != 0; }

  /// q^d, dense over nodes. Destination must exist.
  const std::vector<double>& demand(NodeId d) const;

  /// q~^d: equals q^d except q~^d_d = -sum_o q^d_o.
  std::vector<double> modified_demand(NodeId d) const;

  std::vector<NodeId> origins(NodeId d) const;

  double total_flow() const noexcept { return total_flow_; }
  double destination_total(NodeId d) const;

  /// Number of OD entries recorded, including explicit zero-flow entries.
  std::size_t od_entry_count() const noexcept { return od_entries_; }
  /// Number of OD pairs with strictly positive flow.
  std::size_t positive_pair_count() const noexcept { return positive_pairs_; }

  bool empty() const noexcept { return by_destination_.empty(); }

  DemandTable scaled(double multiplier) const;

  /// Content equality: same node count, destinations and demand vectors.
  friend bool operator==(const DemandTable& a, const DemandTable& b) {
    return a.node_count_ == b.node_count_ && a.by_destination_ == b.by_destination_;
  }

 private:
  NodeId node_count_ = 0;
  std::map<NodeId, std::vector<double>> by_destination_;
  std::size_t od_entries_ = 0;
  std::size_t positive_pairs_ = 0;
  double total_flow_ = 0.0;
};

}  // namespace ngev
