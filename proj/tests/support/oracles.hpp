#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ngev/algebra.hpp"
#include "ngev/network.hpp"

namespace ngev::testing {

/// Minimum route cost by exhaustive simple-path enumeration (positive costs
/// make shortest routes simple). Independent of the Dijkstra route.
double brute_force_sp(const Network& network, std::span<const double> costs, NodeId origin,
                      NodeId destination);

/// Costs of every simple route from origin to destination.
std::vector<double> enumerate_simple_path_costs(const Network& network,
                                                std::span<const double> costs, NodeId origin,
                                                NodeId destination);

/// Per-link flows of a logit path choice evaluated directly from route
/// costs: p(r) proportional to exp(-theta c_r), enumerated over simple
/// paths. Exact on acyclic networks.
std::vector<double> logit_path_flows(const Network& network, std::span<const double> costs,
                                     double theta, NodeId origin, NodeId destination,
                                     double od_flow);

/// Truncated matrix power series [E (+) W (+) W^2 (+) ... (+) W^terms] (x) e^d
/// evaluated literally with the node-indexed operations.
std::vector<double> power_series_mu(const Network& network, std::span<const double> costs,
                                    const Algebra& algebra, NodeId destination, int terms);

/// Adaptive Simpson quadrature of f over [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 2000);

/// Golden-section minimizer over [lo, hi] to absolute interval width tol.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-10);

}  // namespace ngev::testing
