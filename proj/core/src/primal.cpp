#include "ngev/primal.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace ngev {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// theta_hat . H for one commodity, evaluated directly from link flows.
double weighted_entropy(const Network& network, const std::vector<double>& x,
                        const Algebra& algebra) {
  const Graph& graph = network.graph;
  double total = 0.0;
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    const double theta_hat = algebra.node_theta_hat(i);
    if (theta_hat == 0.0) continue;
    double z = 0.0;
    for (LinkId l : graph.out_links(i)) z += x[static_cast<std::size_t>(l)];
    if (z <= 0.0) continue;
    double h = 0.0;
    for (LinkId l : graph.out_links(i)) {
      const double f = x[static_cast<std::size_t>(l)];
      if (f <= 0.0) continue;
      h -= f * std::log(f / (algebra.alpha(l) * z));
    }
    total += theta_hat * h;
  }
  return total;
}

/// Objective along the segment x + gamma (y - x); aggregate flows follow the
/// same interpolation, so one pass per commodity plus the cost integral.
class SegmentObjective {
 public:
  SegmentObjective(const AssignmentProblem& problem, const FlowState& x, const FlowState& y)
      : problem_(problem), x_(x), y_(y),
        blend_(static_cast<std::size_t>(problem.network->link_count())),
        aggregate_(blend_.size()) {}

  double operator()(double gamma) {
    const auto links = aggregate_.size();
    for (std::size_t l = 0; l < links; ++l) {
      aggregate_[l] = x_.aggregate[l] + gamma * (y_.aggregate[l] - x_.aggregate[l]);
      if (aggregate_[l] < 0.0) aggregate_[l] = 0.0;
    }
    double value = problem_.cost_model.cost_integral(aggregate_);
    for (std::size_t c = 0; c < problem_.commodities.size(); ++c) {
      const auto& xc = x_.per_commodity[c];
      const auto& yc = y_.per_commodity[c];
      for (std::size_t l = 0; l < links; ++l) {
        double f = xc[l] + gamma * (yc[l] - xc[l]);
        blend_[l] = f < 0.0 ? 0.0 : f;
      }
      value -= weighted_entropy(*problem_.network, blend_, problem_.commodities[c].algebra);
    }
    return value;
  }

 private:
  const AssignmentProblem& problem_;
  const FlowState& x_;
  const FlowState& y_;
  std::vector<double> blend_;
  std::vector<double> aggregate_;
};

FlowState blend_states(const FlowState& x, const FlowState& y, double gamma) {
  FlowState out = x;
  for (std::size_t l = 0; l < out.aggregate.size(); ++l) {
    out.aggregate[l] += gamma * (y.aggregate[l] - x.aggregate[l]);
    if (out.aggregate[l] < 0.0) out.aggregate[l] = 0.0;
  }
  for (std::size_t c = 0; c < out.per_commodity.size(); ++c) {
    auto& xc = out.per_commodity[c];
    const auto& yc = y.per_commodity[c];
    for (std::size_t l = 0; l < xc.size(); ++l) {
      xc[l] += gamma * (yc[l] - xc[l]);
      if (xc[l] < 0.0) xc[l] = 0.0;
    }
  }
  return out;
}

struct LineSearchOutcome {
  double gamma = 0.0;
  double objective = 0.0;
  bool fallback = false;
};

/// Golden-section minimization of phi over [0, 1] down to the interval
/// tolerance, keeping the best evaluated point; gamma = 1 is probed
/// explicitly so a subproblem that is already optimal ends the solve in one
/// iteration.
LineSearchOutcome golden_section(SegmentObjective& phi, double current_objective,
                                 double interval_tol, int iteration) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double best_gamma = 1.0;
  double best_value = phi(1.0);

  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  auto consider = [&](double g, double f) {
    if (f < best_value) {
      best_value = f;
      best_gamma = g;
    }
  };
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > interval_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = phi(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = phi(x2);
      consider(x2, f2);
    }
  }

  LineSearchOutcome out;
  if (best_value <= current_objective + 1e-12 * std::abs(current_objective)) {
    out.gamma = best_gamma;
    out.objective = best_value;
  } else {
    // No descent found along the segment; take the averaging step instead.
    out.fallback = true;
    out.gamma = 1.0 / (iteration + 1);
    out.objective = phi(out.gamma);
  }
  return out;
}

enum class StepRule { msa, line_search };

PrimalResult run_primal(const AssignmentProblem& problem, const PrimalOptions& options,
                        StepRule rule) {
  if (!(options.objective_tol >= 0.0) || !(options.line_search_tol > 0.0)) {
    fail(ErrorCategory::validation, "primal tolerances must be non-negative");
  }
  const auto start = Clock::now();
  const Network& network = *problem.network;
  LoadContext context;

  PrimalResult result;
  result.costs = std::vector<double>(problem.cost_model.free_flow().begin(),
                                     problem.cost_model.free_flow().end());
  result.flows = options.initial
                     ? *options.initial
                     : assign_all(network, result.costs, problem.commodities,
                                  LoadingMethod::mta, &context);
  result.objective = primal_objective(problem, result.flows);

  double previous_objective = result.objective;
  for (int m = 0; m < options.max_iter; ++m) {
    result.costs = problem.cost_model.cost(result.flows.aggregate);
    const FlowState auxiliary = assign_all(network, result.costs, problem.commodities,
                                           LoadingMethod::mta, &context);

    PrimalTraceRow row;
    row.iter = m + 1;
    if (rule == StepRule::msa) {
      row.gamma = 1.0 / (m + 1);
      result.flows = blend_states(result.flows, auxiliary, row.gamma);
      const double updated = primal_objective(problem, result.flows);
      row.objective = updated;
      result.objective = updated;
    } else {
      SegmentObjective phi(problem, result.flows, auxiliary);
      const auto outcome = golden_section(phi, result.objective, options.line_search_tol, m);
      row.gamma = outcome.gamma;
      row.line_search_fallback = outcome.fallback;
      result.flows = blend_states(result.flows, auxiliary, outcome.gamma);
      row.objective = outcome.objective;
      result.objective = outcome.objective;
    }
    row.elapsed_seconds = seconds_since(start);
    row.eta_x = options.reference_flows
                    ? max_relative_deviation(result.flows.aggregate, *options.reference_flows)
                    : std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(row);
    if (options.record_flows) result.flow_history.push_back(result.flows.aggregate);
    result.iterations = m + 1;

    const double change = std::abs(row.objective - previous_objective);
    previous_objective = row.objective;
    // A zero tolerance disables early stopping (reference-quality runs).
    if (options.objective_tol > 0.0 &&
        change <= options.objective_tol * std::max(1.0, std::abs(row.objective))) {
      result.converged = true;
      break;
    }
  }
  result.costs = problem.cost_model.cost(result.flows.aggregate);
  return result;
}

}  // namespace

AssignmentProblem make_problem(const Network& network, const DemandTable& demand,
                               const ModelSpec& spec) {
  AssignmentProblem problem{&network, BprModel::from(network),
                            plan_commodities(network, demand, spec)};
  return problem;
}

std::vector<double> node_entropy(const Network& network, const std::vector<double>& link_flows,
                                 const Algebra& algebra) {
  const Graph& graph = network.graph;
  std::vector<double> h(static_cast<std::size_t>(graph.node_count()), 0.0);
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    double z = 0.0;
    for (LinkId l : graph.out_links(i)) z += link_flows[static_cast<std::size_t>(l)];
    if (z <= 0.0) continue;
    double value = 0.0;
    for (LinkId l : graph.out_links(i)) {
      const double f = link_flows[static_cast<std::size_t>(l)];
      if (f <= 0.0) continue;
      value -= f * std::log(f / (algebra.alpha(l) * z));
    }
    h[static_cast<std::size_t>(i)] = value;
  }
  return h;
}

double primal_objective(const AssignmentProblem& problem, const FlowState& flows) {
  double value = problem.cost_model.cost_integral(flows.aggregate);
  for (std::size_t c = 0; c < problem.commodities.size(); ++c) {
    value -= weighted_entropy(*problem.network, flows.per_commodity[c],
                              problem.commodities[c].algebra);
  }
  return value;
}

PrimalResult solve_msa(const AssignmentProblem& problem, const PrimalOptions& options) {
  return run_primal(problem, options, StepRule::msa);
}

PrimalResult solve_pl(const AssignmentProblem& problem, const PrimalOptions& options) {
  return run_primal(problem, options, StepRule::line_search);
}

}  // namespace ngev
