#include "ngev/grid.hpp"

#include <cmath>
#include <string>

#include "ngev/errors.hpp"
#include "ngev/shortest_path.hpp"

namespace ngev {

GridInstance generate_grid(int k, double reference_flow, double decay, GridOptions options) {
  if (k < 1) fail(ErrorCategory::validation, "grid size k must be >= 1");
  if (!(reference_flow > 0.0)) fail(ErrorCategory::validation, "reference flow must be positive");
  if (!(decay > 0.0)) fail(ErrorCategory::validation, "gravity decay must be positive");
  if (!(options.free_flow_cost > 0.0) || !(options.capacity > 0.0)) {
    fail(ErrorCategory::validation, "grid link attributes must be positive");
  }

  const int side = 4 * k + 1;
  const NodeId node_count = static_cast<NodeId>(side * side);
  auto node_at = [side](int x, int y) { return static_cast<NodeId>(y * side + x); };

  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(16 * k * side));
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const NodeId n = node_at(x, y);
      if (x + 1 < side) {
        links.push_back({n, node_at(x + 1, y)});
        links.push_back({node_at(x + 1, y), n});
      }
      if (y + 1 < side) {
        links.push_back({n, node_at(x, y + 1)});
        links.push_back({node_at(x, y + 1), n});
      }
    }
  }

  GridInstance out;
  out.k = k;
  const std::size_t link_count = links.size();
  out.network = Network(Graph(node_count, std::move(links)),
                        std::vector<double>(link_count, options.free_flow_cost),
                        std::vector<double>(link_count, options.capacity));

  // Checkerboard of the coarse lattice: coarse coordinates (a, b) with a+b even.
  for (int b = 0; b <= 2 * k; ++b) {
    for (int a = 0; a <= 2 * k; ++a) {
      if ((a + b) % 2 != 0) continue;
      out.od_nodes.push_back(node_at(2 * a, 2 * b));
    }
  }

  out.demand = DemandTable(node_count);
  const auto& graph = out.network.graph;
  const auto distance_to = sp_distance_table(out.network, out.network.free_flow_cost, out.od_nodes);
  for (std::size_t oi = 0; oi < out.od_nodes.size(); ++oi) {
    const NodeId o = out.od_nodes[oi];
    double denom = 0.0;
    for (std::size_t di = 0; di < out.od_nodes.size(); ++di) {
      if (di == oi) continue;
      denom += std::exp(-decay * distance_to[di][static_cast<std::size_t>(o)]);
    }
    const double generated = graph.out_degree(o) * reference_flow;
    for (std::size_t di = 0; di < out.od_nodes.size(); ++di) {
      if (di == oi) continue;
      const double w = std::exp(-decay * distance_to[di][static_cast<std::size_t>(o)]);
      out.demand.add(o, out.od_nodes[di], generated * w / denom);
    }
  }
  return out;
}

}  // namespace ngev
