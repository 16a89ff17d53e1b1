#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "ngev/errors.hpp"
#include "ngev/network.hpp"

namespace ngev {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Network-GEV parameters for one destination (or one OD commodity):
/// a strictly positive scale theta per node and an allocation weight per
/// link. alpha of link ij is the membership of head node j to its
/// predecessor i; the weights over the in-links of each node sum to one.
struct DestParams {
  std::vector<double> theta;
  std::vector<double> alpha;

  friend bool operator==(const DestParams&, const DestParams&) = default;
};

/// Destination-indexed parameter table.
class NgevParams {
 public:
  void set(NodeId destination, DestParams params) { table_[destination] = std::move(params); }
  const DestParams& at(NodeId destination) const {
    auto it = table_.find(destination);
    if (it == table_.end()) fail(ErrorCategory::structural, "no parameters for destination");
    return it->second;
  }
  bool contains(NodeId destination) const { return table_.count(destination) != 0; }

 private:
  std::map<NodeId, DestParams> table_;
};

enum class AlgebraType { shortest_path, logit, ngev };

/// One instance of the path algebra <R u {inf}, oplus, otimes>. The three
/// route-choice models share the same fixed point mu = W (x) mu (+) e and
/// differ only in the node-indexed addition and the link weights:
///
///   shortest path:  x (+) y = min(x, y)                 w = c
///   logit(theta):   x (+) y = lse_theta(x, y)           w = c
///   network GEV:    x (+)_i y = lse_theta_i(x, y)       w = c - ln(alpha)/theta_i
///
/// where lse_t(x, y) = -ln(exp(-t x) + exp(-t y)) / t. Multiplication is
/// the same for all three: -ln(exp(-t x) exp(-t y)) / t = x + y. The zero
/// element is +inf and the unit element 0.
class Algebra {
 public:
  static Algebra shortest_path() { return Algebra(AlgebraType::shortest_path, 0.0, {}); }
  static Algebra logit(double theta);
  static Algebra ngev(DestParams params);

  AlgebraType type() const noexcept { return type_; }
  bool is_stochastic() const noexcept { return type_ != AlgebraType::shortest_path; }
  const DestParams& params() const { return params_; }
  double logit_theta() const noexcept { return logit_theta_; }

  /// Scale used by the addition at node i; +inf for the min algebra.
  double node_theta(NodeId i) const {
    switch (type_) {
      case AlgebraType::shortest_path: return kInfinity;
      case AlgebraType::logit: return logit_theta_;
      case AlgebraType::ngev: return params_.theta[static_cast<std::size_t>(i)];
    }
    return kInfinity;
  }
  /// 1/theta_i; zero for the min algebra.
  double node_theta_hat(NodeId i) const {
    const double t = node_theta(i);
    return std::isinf(t) ? 0.0 : 1.0 / t;
  }

  double alpha(LinkId l) const {
    return type_ == AlgebraType::ngev ? params_.alpha[static_cast<std::size_t>(l)] : 1.0;
  }

  double oplus(NodeId i, double x, double y) const;
  static double otimes(double x, double y) {
    return (std::isinf(x) || std::isinf(y)) ? kInfinity : x + y;
  }

  /// Table entry w_ij for the given flow cost of the link; +inf encodes an
  /// absent link (alpha = 0 falls out naturally as -ln 0).
  double link_weight(LinkId l, NodeId tail, double cost) const {
    if (type_ != AlgebraType::ngev) return cost;
    const double a = params_.alpha[static_cast<std::size_t>(l)];
    if (a <= 0.0) return kInfinity;
    return cost - std::log(a) / params_.theta[static_cast<std::size_t>(tail)];
  }

 private:
  Algebra(AlgebraType type, double theta, DestParams params)
      : type_(type), logit_theta_(theta), params_(std::move(params)) {}

  AlgebraType type_;
  double logit_theta_ = 0.0;
  DestParams params_;
};

struct MuSolveOptions {
  double tol = 1e-10;
  int max_sweeps = 10000;
  /// Starting point; when absent the solve starts from shortest-path
  /// distances under the same costs.
  const std::vector<double>* warm_start = nullptr;
};

struct MuResult {
  std::vector<double> mu;
  int sweeps = 0;
};

/// Expected minimum cost table mu^d: the solution of mu = W (x) mu (+) e
/// under the chosen algebra, with mu_d pinned to the unit element and +inf
/// at nodes that cannot reach d. Positive costs are required; failure of
/// the value iteration to contract raises a divergence error.
MuResult expected_min_cost(const Network& network, std::span<const double> costs,
                           const Algebra& algebra, NodeId destination,
                           const MuSolveOptions& options = {},
                           const std::vector<std::uint8_t>* link_enabled = nullptr);

/// Same fixed point evaluated literally through the oplus/otimes matrix
/// machinery with Jacobi sweeps. Slower; kept as the reference route for
/// the specialized solver above.
MuResult expected_min_cost_generic(const Network& network, std::span<const double> costs,
                                   const Algebra& algebra, NodeId destination,
                                   const MuSolveOptions& options = {});

/// Max over non-destination nodes with finite mu of
/// |1 - sum_j alpha_ji exp(-theta_i (c_ij + mu_j - mu_i))|.
double fixed_point_residual(const Network& network, std::span<const double> costs,
                            const Algebra& algebra, NodeId destination,
                            const std::vector<double>& mu);

/// Plain fixed-point driver: applies `step` (mapping the current vector to
/// the next one) until the sup-norm change over finite entries drops to
/// tol, and reports the iterate count. Exceeding the cap is a divergence
/// error.
template <class Step>
MuResult value_iteration(Step&& step, std::vector<double> init, double tol, int max_sweeps) {
  if (!(tol > 0.0)) fail(ErrorCategory::validation, "tolerance must be positive");
  MuResult out;
  out.mu = std::move(init);
  std::vector<double> next(out.mu.size());
  for (out.sweeps = 1; out.sweeps <= max_sweeps; ++out.sweeps) {
    step(out.mu, next);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (std::isfinite(next[i]) && std::isfinite(out.mu[i])) {
        change = std::max(change, std::abs(next[i] - out.mu[i]));
      } else if (std::isfinite(next[i]) != std::isfinite(out.mu[i])) {
        change = kInfinity;
      }
    }
    out.mu.swap(next);
    if (change <= tol) return out;
  }
  fail(ErrorCategory::divergence,
       "value iteration did not reach tolerance within " + std::to_string(max_sweeps) +
           " sweeps");
}

}  // namespace ngev
