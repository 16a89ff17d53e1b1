#pragma once

#include <span>
#include <vector>

#include "ngev/network.hpp"

namespace ngev {

/// D^d(i): exact least-cost distance from every node i to `destination`
/// under the given strictly positive link costs. Unreachable nodes get
/// +infinity; D^d(d) = 0. Optional `link_enabled` restricts the usable
/// link set (entries outside the mask are treated as absent).
std::vector<double> sp_distances_to(const Graph& graph, std::span<const double> costs,
                                    NodeId destination,
                                    const std::vector<std::uint8_t>* link_enabled = nullptr);

/// Distance tables keyed by position in `destinations`.
std::vector<std::vector<double>> sp_distance_table(const Network& network,
                                                   std::span<const double> costs,
                                                   std::span<const NodeId> destinations);

/// Shortest-path tree toward `destination`: tree_link[i] is the first link
/// of the least-cost route from i, or kNoLink at the destination and at
/// unreachable nodes. Ties keep the link discovered first (lowest link id
/// among equal-cost relaxations), so the tree is deterministic.
struct SpTree {
  std::vector<double> distance;
  std::vector<LinkId> tree_link;
};
SpTree sp_tree_to(const Graph& graph, std::span<const double> costs, NodeId destination);

/// All-or-nothing loading: pushes each origin's demand down the shortest
/// path tree toward `destination`. Demand at unreachable nodes is an error.
std::vector<double> all_or_nothing(const Graph& graph, std::span<const double> costs,
                                   std::span<const double> demand, NodeId destination);

}  // namespace ngev
