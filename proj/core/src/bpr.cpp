#include "ngev/bpr.hpp"

#include <cmath>
#include <string>

#include "ngev/errors.hpp"

namespace ngev {

BprModel::BprModel(std::vector<double> free_flow_cost, std::vector<double> capacity)
    : free_flow_(std::move(free_flow_cost)), capacity_(std::move(capacity)) {
  if (free_flow_.size() != capacity_.size()) {
    fail(ErrorCategory::validation, "BPR attribute size mismatch");
  }
  for (std::size_t l = 0; l < free_flow_.size(); ++l) {
    if (!(free_flow_[l] > 0.0) || !(capacity_[l] > 0.0)) {
      fail(ErrorCategory::validation, "BPR attributes must be positive");
    }
  }
}

void BprModel::check_flows(std::span<const double> flows) const {
  if (flows.size() != free_flow_.size()) {
    fail(ErrorCategory::validation, "flow vector size mismatch");
  }
  for (std::size_t l = 0; l < flows.size(); ++l) {
    if (!(flows[l] >= 0.0) || !std::isfinite(flows[l])) {
      fail(ErrorCategory::validation, "link flow " + std::to_string(l) + " must be non-negative");
    }
  }
}

void BprModel::check_costs(std::span<const double> costs) const {
  if (costs.size() != free_flow_.size()) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  for (std::size_t l = 0; l < costs.size(); ++l) {
    if (!(costs[l] >= free_flow_[l] * (1.0 - 1e-12))) {
      fail(ErrorCategory::validation,
           "link cost " + std::to_string(l) + " lies below the free-flow cost");
    }
  }
}

double BprModel::link_cost(std::size_t l, double flow) const {
  const double r = flow / capacity_[l];
  const double r2 = r * r;
  return free_flow_[l] * (1.0 + r2 * r2);
}

std::vector<double> BprModel::cost(std::span<const double> flows) const {
  check_flows(flows);
  std::vector<double> out(flows.size());
  for (std::size_t l = 0; l < flows.size(); ++l) out[l] = link_cost(l, flows[l]);
  return out;
}

std::vector<double> BprModel::inverse_cost(std::span<const double> costs) const {
  check_costs(costs);
  return inverse_cost_extended(costs);
}

std::vector<double> BprModel::inverse_cost_extended(std::span<const double> costs) const {
  if (costs.size() != free_flow_.size()) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  std::vector<double> out(costs.size());
  for (std::size_t l = 0; l < costs.size(); ++l) {
    const double excess = std::max(0.0, costs[l] - free_flow_[l]) / free_flow_[l];
    out[l] = capacity_[l] * std::pow(excess, 0.25);
  }
  return out;
}

double BprModel::cost_integral(std::span<const double> flows) const {
  check_flows(flows);
  double total = 0.0;
  for (std::size_t l = 0; l < flows.size(); ++l) {
    const double x = flows[l];
    const double k = capacity_[l];
    const double r = x / k;
    const double r4 = (r * r) * (r * r);
    total += free_flow_[l] * (x + x * r4 / 5.0);
  }
  return total;
}

double BprModel::conjugate_integral(std::span<const double> costs) const {
  check_costs(costs);
  return conjugate_integral_extended(costs);
}

double BprModel::conjugate_integral_extended(std::span<const double> costs) const {
  if (costs.size() != free_flow_.size()) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < costs.size(); ++l) {
    const double excess = std::max(0.0, costs[l] - free_flow_[l]) / free_flow_[l];
    total += 0.8 * capacity_[l] * free_flow_[l] * std::pow(excess, 1.25);
  }
  return total;
}

}  // namespace ngev
