#include "ngev/algebra.hpp"

#include <algorithm>
#include <string>

#include "ngev/shortest_path.hpp"

namespace ngev {

namespace {

// Guard against unbounded descent when the underlying power series does not
// converge (a cheap cycle the scale cannot damp).
constexpr double kDivergenceFloor = -1e13;

void check_inputs(const Network& network, std::span<const double> costs, NodeId destination) {
  if (costs.size() != static_cast<std::size_t>(network.link_count())) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  for (std::size_t l = 0; l < costs.size(); ++l) {
    if (!(costs[l] > 0.0) || !std::isfinite(costs[l])) {
      fail(ErrorCategory::validation,
           "link cost " + std::to_string(l) + " must be positive");
    }
  }
  if (destination < 0 || destination >= network.node_count()) {
    fail(ErrorCategory::structural, "destination out of range");
  }
}

}  // namespace

Algebra Algebra::logit(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    fail(ErrorCategory::validation, "logit scale must be positive");
  }
  return Algebra(AlgebraType::logit, theta, {});
}

Algebra Algebra::ngev(DestParams params) {
  for (double t : params.theta) {
    if (!(t > 0.0)) fail(ErrorCategory::validation, "node scale must be positive");
  }
  for (double a : params.alpha) {
    if (!(a >= 0.0)) fail(ErrorCategory::validation, "allocation weight must be non-negative");
  }
  return Algebra(AlgebraType::ngev, 0.0, std::move(params));
}

double Algebra::oplus(NodeId i, double x, double y) const {
  if (std::isinf(x)) return y;
  if (std::isinf(y)) return x;
  if (type_ == AlgebraType::shortest_path) return std::min(x, y);
  const double theta = node_theta(i);
  const double m = std::min(x, y);
  return m - std::log1p(std::exp(-theta * std::abs(x - y))) / theta;
}

MuResult expected_min_cost(const Network& network, std::span<const double> costs,
                           const Algebra& algebra, NodeId destination,
                           const MuSolveOptions& options,
                           const std::vector<std::uint8_t>* link_enabled) {
  check_inputs(network, costs, destination);
  const Graph& graph = network.graph;
  const NodeId n = graph.node_count();

  if (algebra.type() == AlgebraType::shortest_path) {
    MuResult out;
    out.mu = sp_distances_to(graph, costs, destination, link_enabled);
    out.sweeps = 1;
    return out;
  }
  if (algebra.type() == AlgebraType::ngev &&
      (algebra.params().theta.size() != static_cast<std::size_t>(n) ||
       algebra.params().alpha.size() != static_cast<std::size_t>(costs.size()))) {
    fail(ErrorCategory::validation, "parameter table size mismatch");
  }

  // Shortest-path distances give the starting point and the sweep order
  // (nodes closer to the destination settle first).
  const std::vector<double> sp = sp_distances_to(graph, costs, destination, link_enabled);
  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    if (i != destination && std::isfinite(sp[static_cast<std::size_t>(i)])) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const double da = sp[static_cast<std::size_t>(a)];
    const double db = sp[static_cast<std::size_t>(b)];
    if (da != db) return da < db;
    return a < b;
  });

  MuResult out;
  if (options.warm_start) {
    if (options.warm_start->size() != static_cast<std::size_t>(n)) {
      fail(ErrorCategory::validation, "warm start size mismatch");
    }
    out.mu = *options.warm_start;
    // A warm start from another cost pattern may disagree on reachability.
    for (NodeId i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (std::isfinite(sp[s]) != std::isfinite(out.mu[s])) out.mu[s] = sp[s];
    }
  } else {
    out.mu = sp;
  }
  out.mu[static_cast<std::size_t>(destination)] = 0.0;

  auto& mu = out.mu;
  for (out.sweeps = 1; out.sweeps <= options.max_sweeps; ++out.sweeps) {
    double change = 0.0;
    for (NodeId i : order) {
      const double theta = algebra.node_theta(i);
      double best = kInfinity;
      for (LinkId l : graph.out_links(i)) {
        if (link_enabled && !(*link_enabled)[static_cast<std::size_t>(l)]) continue;
        if (algebra.alpha(l) <= 0.0) continue;
        const double v = costs[static_cast<std::size_t>(l)] +
                         mu[static_cast<std::size_t>(graph.link(l).head)];
        best = std::min(best, v);
      }
      double updated;
      if (std::isinf(best)) {
        updated = kInfinity;
      } else {
        double acc = 0.0;
        for (LinkId l : graph.out_links(i)) {
          if (link_enabled && !(*link_enabled)[static_cast<std::size_t>(l)]) continue;
          const double a = algebra.alpha(l);
          if (a <= 0.0) continue;
          const double v = costs[static_cast<std::size_t>(l)] +
                           mu[static_cast<std::size_t>(graph.link(l).head)];
          if (std::isinf(v)) continue;
          acc += a * std::exp(-theta * (v - best));
        }
        updated = best - std::log(acc) / theta;
      }
      const double previous = mu[static_cast<std::size_t>(i)];
      mu[static_cast<std::size_t>(i)] = updated;
      if (std::isfinite(updated) && std::isfinite(previous)) {
        change = std::max(change, std::abs(updated - previous));
      } else if (std::isfinite(updated) != std::isfinite(previous)) {
        change = kInfinity;
      }
      if (updated < kDivergenceFloor) {
        fail(ErrorCategory::divergence,
             "expected minimum cost diverges toward -inf at node " + std::to_string(i));
      }
    }
    if (change <= options.tol) return out;
  }
  fail(ErrorCategory::divergence,
       "expected minimum cost did not converge within " +
           std::to_string(options.max_sweeps) + " sweeps");
}

MuResult expected_min_cost_generic(const Network& network, std::span<const double> costs,
                                   const Algebra& algebra, NodeId destination,
                                   const MuSolveOptions& options) {
  check_inputs(network, costs, destination);
  const Graph& graph = network.graph;
  const NodeId n = graph.node_count();

  std::vector<double> init =
      options.warm_start ? *options.warm_start : sp_distances_to(graph, costs, destination);
  init[static_cast<std::size_t>(destination)] = 0.0;

  auto step = [&](const std::vector<double>& current, std::vector<double>& next) {
    for (NodeId i = 0; i < n; ++i) {
      if (i == destination) {
        next[static_cast<std::size_t>(i)] = 0.0;  // unit element from e^d
        continue;
      }
      double acc = kInfinity;  // zero element
      for (LinkId l : graph.out_links(i)) {
        const double w = algebra.link_weight(l, i, costs[static_cast<std::size_t>(l)]);
        const double term =
            Algebra::otimes(w, current[static_cast<std::size_t>(graph.link(l).head)]);
        acc = algebra.oplus(i, acc, term);
      }
      next[static_cast<std::size_t>(i)] = acc;
      if (acc < kDivergenceFloor) {
        fail(ErrorCategory::divergence, "matrix power series does not converge");
      }
    }
  };
  return value_iteration(step, std::move(init), options.tol, options.max_sweeps);
}

double fixed_point_residual(const Network& network, std::span<const double> costs,
                            const Algebra& algebra, NodeId destination,
                            const std::vector<double>& mu) {
  const Graph& graph = network.graph;
  double worst = 0.0;
  if (!algebra.is_stochastic()) {
    // Bellman residual of the min-plus fixed point.
    for (NodeId i = 0; i < graph.node_count(); ++i) {
      if (i == destination || !std::isfinite(mu[static_cast<std::size_t>(i)])) continue;
      double best = kInfinity;
      for (LinkId l : graph.out_links(i)) {
        best = std::min(best, costs[static_cast<std::size_t>(l)] +
                                  mu[static_cast<std::size_t>(graph.link(l).head)]);
      }
      worst = std::max(worst, std::abs(mu[static_cast<std::size_t>(i)] - best));
    }
    return worst;
  }
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (i == destination || !std::isfinite(mu[static_cast<std::size_t>(i)])) continue;
    const double theta = algebra.node_theta(i);
    double sum = 0.0;
    for (LinkId l : graph.out_links(i)) {
      const double a = algebra.alpha(l);
      if (a <= 0.0) continue;
      const double mj = mu[static_cast<std::size_t>(graph.link(l).head)];
      if (!std::isfinite(mj)) continue;
      sum += a * std::exp(-theta * (costs[static_cast<std::size_t>(l)] + mj -
                                    mu[static_cast<std::size_t>(i)]));
    }
    worst = std::max(worst, std::abs(1.0 - sum));
  }
  return worst;
}

}  // namespace ngev
