#pragma once

#include <span>
#include <vector>

#include "ngev/network.hpp"

namespace ngev {

/// Separable BPR link performance with fixed exponent 4:
///   c(X)      = cbar (1 + (X/kappa)^4)                per link
///   c^{-1}(c) = kappa ((c - cbar)/cbar)^{1/4}         defined for c >= cbar
///   C(X)      = sum cbar (X + X^5 / (5 kappa^4))      integral of c
///   C*(c)     = sum (4/5) kappa cbar ((c-cbar)/cbar)^{5/4}
/// C* integrates the inverse from cbar, so C*(cbar) = 0 and the Fenchel
/// identity C(X) + C*(c(X)) = c(X) . X holds without an offset.
class BprModel {
 public:
  BprModel(std::vector<double> free_flow_cost, std::vector<double> capacity);
  static BprModel from(const Network& network) {
    return BprModel(network.free_flow_cost, network.capacity);
  }

  std::size_t link_count() const noexcept { return free_flow_.size(); }
  std::span<const double> free_flow() const noexcept { return free_flow_; }

  std::vector<double> cost(std::span<const double> flows) const;
  double link_cost(std::size_t l, double flow) const;

  std::vector<double> inverse_cost(std::span<const double> costs) const;

  double cost_integral(std::span<const double> flows) const;
  double conjugate_integral(std::span<const double> costs) const;

  /// Legendre-transform values on the whole cost axis: below the free-flow
  /// floor the maximizing flow is zero, so the inverse is 0 and the
  /// conjugate integral 0 (instead of a domain error). The dual solvers
  /// need these because the momentum extrapolation point may dip below the
  /// floor even though every iterate is projected back onto it.
  std::vector<double> inverse_cost_extended(std::span<const double> costs) const;
  double conjugate_integral_extended(std::span<const double> costs) const;

 private:
  void check_flows(std::span<const double> flows) const;
  void check_costs(std::span<const double> costs) const;

  std::vector<double> free_flow_;
  std::vector<double> capacity_;
};

}  // namespace ngev
