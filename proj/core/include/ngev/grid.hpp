#pragma once

#include <vector>

#include "ngev/network.hpp"

namespace ngev {

struct GridOptions {
  double free_flow_cost = 1.0;
  double capacity = 10000.0;
};

struct GridInstance {
  Network network;
  DemandTable demand;
  std::vector<NodeId> od_nodes;
  int k = 0;
};

/// Bidirectional square lattice of (4k+1)x(4k+1) nodes; every adjacent pair
/// carries two opposing links, giving 16k(4k+1) links. Origin/destination
/// nodes sit on the spacing-2 sub-lattice at coarse coordinates (a, b) with
/// a + b even, yielding 2k(k+1)+1 of them; each is both origin and
/// destination. Demand follows a gravity model: node o sends
/// |F(o)| * reference_flow in total, split across destinations d != o in
/// proportion to exp(-decay * sp_cost(o, d)).
GridInstance generate_grid(int k, double reference_flow, double decay,
                           GridOptions options = {});

}  // namespace ngev
