#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ngev/algebra.hpp"
#include "ngev/models.hpp"
#include "ngev/network.hpp"

namespace ngev {

enum class LoadingMethod { mta, dial };

LoadingMethod parse_loading_method(const std::string& name);
const char* to_string(LoadingMethod method);

/// Conditional link-choice probabilities p^d_{ij|i} for one destination,
/// dense per link. Nodes with infinite mu emit none, and no choice happens
/// at the destination. Values below 1e-303 are treated as structural zeros.
std::vector<double> choice_probabilities(const Network& network, std::span<const double> costs,
                                         const Algebra& algebra, const std::vector<double>& mu,
                                         NodeId destination,
                                         const std::vector<std::uint8_t>* link_enabled = nullptr);

struct NodeFlowOptions {
  double relative_tol = 1e-12;
  int max_sweeps = 100000;
};

/// Node throughputs z^d solving z = P^T z + q. Demand at a node that emits
/// no probabilities (no route to the destination) is an unreachable error.
std::vector<double> solve_node_flows(const Network& network, const std::vector<double>& prob,
                                     std::span<const double> demand, NodeId destination,
                                     const std::vector<double>& mu,
                                     const NodeFlowOptions& options = {});

/// Per-commodity loading cache: reusing the previous mu table warm-starts
/// the value iteration when costs move a little between calls.
struct LoadContext {
  std::vector<std::vector<double>> mu;
};

struct CommodityLoad {
  std::vector<double> link_flows;
  std::vector<double> mu;
  std::vector<double> probabilities;
};

/// Loads one commodity at the given costs. `mta` solves the fixed point on
/// the full link set; `dial` first restricts successor links to those that
/// strictly descend in shortest-path distance to the destination (computed
/// under the same costs), which yields an acyclic network, then runs the
/// same two-step solve on it.
CommodityLoad load_commodity(const Network& network, std::span<const double> costs,
                             const Commodity& commodity, LoadingMethod method,
                             const std::vector<double>* warm_mu = nullptr);

struct FlowState {
  std::vector<std::vector<double>> per_commodity;
  std::vector<double> aggregate;

  bool empty() const noexcept { return per_commodity.empty(); }
};

/// Runs load_commodity over all commodities in order and aggregates
/// X = sum_d x^d with a fixed reduction order, so results are
/// deterministic.
FlowState assign_all(const Network& network, std::span<const double> costs,
                     std::span<const Commodity> commodities, LoadingMethod method,
                     LoadContext* context = nullptr);

/// Max node imbalance |sum_out x - sum_in x - q~_i| of one commodity.
double conservation_residual(const Network& network, const std::vector<double>& link_flows,
                             const Commodity& commodity);

struct PathEnumResult {
  std::vector<double> link_flows;
  double enumerated_mass = 0.0;   // sum of enumerated route probabilities
  double truncated_mass = 0.0;    // 1 - enumerated_mass
  std::size_t path_count = 0;
  int max_path_length = 0;
};

/// Exhaustive route enumeration oracle: walks every route from origin to
/// destination with at most `max_loops` re-entries per node, scores each
/// route as the product of its conditional link probabilities and
/// accumulates link flows. Only practical on small networks; exceeding
/// `path_cap` raises an infeasible error.
PathEnumResult enumerate_path_flows(const Network& network, std::span<const double> costs,
                                    const Algebra& algebra, NodeId origin, NodeId destination,
                                    double od_flow, int max_loops,
                                    std::size_t path_cap = 5000000);

struct PathSampleStats {
  std::size_t sampled = 0;
  std::size_t unique_paths = 0;
  std::size_t cyclic_paths = 0;   // paths visiting some node twice or more
  std::size_t truncated = 0;      // walks cut off by the step cap
};

/// Monte-Carlo walk sampler over the link-choice chain of one commodity;
/// reports path variety statistics. Seeded and reproducible.
PathSampleStats sample_paths(const Network& network, const std::vector<double>& prob,
                             NodeId origin, NodeId destination, std::size_t samples,
                             std::uint64_t seed, std::size_t max_steps = 10000);

}  // namespace ngev
