#include "ngev/dual.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace ngev {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_costs_usable(const AssignmentProblem& problem, std::span<const double> costs) {
  if (costs.size() != problem.cost_model.free_flow().size()) {
    fail(ErrorCategory::validation, "cost vector size mismatch");
  }
  for (std::size_t l = 0; l < costs.size(); ++l) {
    if (!(costs[l] > 0.0) || !std::isfinite(costs[l])) {
      fail(ErrorCategory::validation, "cost vector must be positive");
    }
  }
}

/// Demand-weighted expected minimum costs: sum over commodities of
/// mu^d . q~^d. Since mu_d = 0, only origin terms survive.
double demand_term(const AssignmentProblem& problem, std::span<const double> costs,
                   MuCache* cache, double mu_tol) {
  const Network& network = *problem.network;
  if (cache && cache->mu.size() != problem.commodities.size()) {
    cache->mu.assign(problem.commodities.size(), {});
  }
  double total = 0.0;
  for (std::size_t c = 0; c < problem.commodities.size(); ++c) {
    const Commodity& commodity = problem.commodities[c];
    MuSolveOptions options;
    options.tol = mu_tol;
    if (cache && !cache->mu[c].empty()) options.warm_start = &cache->mu[c];
    auto solved = expected_min_cost(network, costs, commodity.algebra, commodity.destination,
                                    options);
    for (NodeId i = 0; i < network.node_count(); ++i) {
      const double q = commodity.demand[static_cast<std::size_t>(i)];
      if (q <= 0.0) continue;
      const double mu = solved.mu[static_cast<std::size_t>(i)];
      if (!std::isfinite(mu)) {
        fail(ErrorCategory::unreachable,
             "demand at node " + std::to_string(i) + " cannot reach destination " +
                 std::to_string(commodity.destination));
      }
      total += q * mu;
    }
    if (cache) cache->mu[c] = std::move(solved.mu);
  }
  return total;
}

struct Momentum {
  double t = 1.0;
  int j = 0;

  double next_t() const { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }
};

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double dual_objective(const AssignmentProblem& problem, std::span<const double> costs,
                      MuCache* cache, double mu_tol) {
  check_costs_usable(problem, costs);
  return -problem.cost_model.conjugate_integral_extended(costs) +
         demand_term(problem, costs, cache, mu_tol);
}

std::vector<double> dual_gradient(const AssignmentProblem& problem, std::span<const double> costs,
                                  double* objective_out, MuCache* cache, double mu_tol) {
  check_costs_usable(problem, costs);
  const Network& network = *problem.network;
  if (cache && cache->mu.size() != problem.commodities.size()) {
    cache->mu.assign(problem.commodities.size(), {});
  }

  std::vector<double> loaded(static_cast<std::size_t>(network.link_count()), 0.0);
  double demand_value = 0.0;
  for (std::size_t c = 0; c < problem.commodities.size(); ++c) {
    const Commodity& commodity = problem.commodities[c];
    const std::vector<double>* warm =
        (cache && !cache->mu[c].empty()) ? &cache->mu[c] : nullptr;
    auto load = load_commodity(network, costs, commodity, LoadingMethod::mta, warm);
    for (std::size_t l = 0; l < loaded.size(); ++l) loaded[l] += load.link_flows[l];
    for (NodeId i = 0; i < network.node_count(); ++i) {
      const double q = commodity.demand[static_cast<std::size_t>(i)];
      if (q > 0.0) demand_value += q * load.mu[static_cast<std::size_t>(i)];
    }
    if (cache) cache->mu[c] = std::move(load.mu);
  }
  if (objective_out) {
    *objective_out = -problem.cost_model.conjugate_integral_extended(costs) + demand_value;
  }
  const auto implied = problem.cost_model.inverse_cost_extended(costs);
  for (std::size_t l = 0; l < loaded.size(); ++l) loaded[l] -= implied[l];
  return loaded;
}

std::vector<double> project_to_feasible_costs(std::span<const double> candidate,
                                              std::span<const double> free_flow) {
  if (candidate.size() != free_flow.size()) {
    fail(ErrorCategory::validation, "projection size mismatch");
  }
  std::vector<double> out(candidate.size());
  for (std::size_t l = 0; l < out.size(); ++l) {
    out[l] = std::max(candidate[l], free_flow[l]);
  }
  return out;
}

DualResult solve_gp(const AssignmentProblem& problem, const DualOptions& options) {
  if (!(options.step_size > 0.0)) fail(ErrorCategory::validation, "step size must be positive");
  const auto start = Clock::now();
  const auto free_flow = problem.cost_model.free_flow();
  MuCache cache;

  DualResult result;
  result.costs.assign(free_flow.begin(), free_flow.end());
  double previous = -std::numeric_limits<double>::infinity();

  for (int m = 0; m < options.max_iter; ++m) {
    double objective = 0.0;
    const auto gradient =
        dual_gradient(problem, result.costs, &objective, &cache, options.mu_tol);

    std::vector<double> candidate(result.costs.size());
    for (std::size_t l = 0; l < candidate.size(); ++l) {
      candidate[l] = result.costs[l] + options.step_size * gradient[l];
    }
    result.costs = project_to_feasible_costs(candidate, free_flow);
    result.dual_objective = objective;

    DualTraceRow row;
    row.iter = m + 1;
    row.elapsed_seconds = seconds_since(start);
    row.dual_objective = objective;
    row.step_size = options.step_size;
    row.eta_c = options.reference_costs
                    ? max_relative_deviation(result.costs, *options.reference_costs)
                    : std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(row);
    if (options.record_costs) result.cost_history.push_back(result.costs);
    result.iterations = m + 1;

    if (m > 0 && options.objective_tol > 0.0 &&
        std::abs(objective - previous) <=
            options.objective_tol * std::max(1.0, std::abs(objective))) {
      result.converged = true;
      break;
    }
    previous = objective;
  }
  // Report the objective at the final iterate.
  result.dual_objective = dual_objective(problem, result.costs, &cache, options.mu_tol);
  return result;
}

DualResult solve_agp(const AssignmentProblem& problem, const DualOptions& options) {
  if (options.backtracking) {
    if (!(options.initial_step > 0.0)) {
      fail(ErrorCategory::validation, "initial step must be positive");
    }
    if (!(options.backtrack_xi > 0.0 && options.backtrack_xi < 1.0)) {
      fail(ErrorCategory::validation, "backtracking factor must lie in (0, 1)");
    }
  } else if (!(options.step_size > 0.0)) {
    fail(ErrorCategory::validation, "step size must be positive");
  }
  if (options.k_min < 0) fail(ErrorCategory::validation, "k_min must be non-negative");

  const auto start = Clock::now();
  const auto free_flow = problem.cost_model.free_flow();
  MuCache gradient_cache, trial_cache;

  DualResult result;
  result.costs.assign(free_flow.begin(), free_flow.end());
  std::vector<double> extrapolated = result.costs;
  Momentum momentum;
  double s = options.backtracking ? options.initial_step : options.step_size;
  double objective_at_c = dual_objective(problem, result.costs, &trial_cache, options.mu_tol);

  for (int m = 0; m < options.max_iter; ++m) {
    double objective_at_b = 0.0;
    const auto gradient =
        dual_gradient(problem, extrapolated, &objective_at_b, &gradient_cache, options.mu_tol);

    std::vector<double> next_costs;
    double objective_next = 0.0;
    int backtrack_count = 0;
    if (options.backtracking) {
      // Smallest i with s = xi^i s_start satisfying the quadratic-model
      // bound of the minimization form:
      //   -Z(p) <= -Z(b) - (p-b).g + |p-b|^2/(2s).
      // The search starts one shrink notch above the previously accepted
      // step (capped at the initial step), so one harsh transient cannot
      // pin the whole schedule at its worst-case value.
      if (options.step_recovery > 0) {
        s = std::min(s / std::pow(options.backtrack_xi, options.step_recovery),
                     options.initial_step);
      }
      for (;;) {
        std::vector<double> candidate(extrapolated.size());
        for (std::size_t l = 0; l < candidate.size(); ++l) {
          candidate[l] = extrapolated[l] + s * gradient[l];
        }
        next_costs = project_to_feasible_costs(candidate, free_flow);
        objective_next = dual_objective(problem, next_costs, &trial_cache, options.mu_tol);
        std::vector<double> step(next_costs.size());
        for (std::size_t l = 0; l < step.size(); ++l) {
          step[l] = next_costs[l] - extrapolated[l];
        }
        const double model = objective_at_b + dot(step, gradient) -
                             squared_distance(next_costs, extrapolated) / (2.0 * s);
        if (objective_next >= model) break;
        s *= options.backtrack_xi;
        ++backtrack_count;
        if (s < options.step_floor) {
          throw StallError(
              "backtracking step size collapsed below the floor at iteration " +
                  std::to_string(m + 1),
              std::move(result));
        }
      }
    } else {
      std::vector<double> candidate(extrapolated.size());
      for (std::size_t l = 0; l < candidate.size(); ++l) {
        candidate[l] = extrapolated[l] + s * gradient[l];
      }
      next_costs = project_to_feasible_costs(candidate, free_flow);
      objective_next = dual_objective(problem, next_costs, &trial_cache, options.mu_tol);
    }

    const double t_next = momentum.next_t();
    const double coefficient = (momentum.t - 1.0) / t_next;
    extrapolated.resize(next_costs.size());
    for (std::size_t l = 0; l < next_costs.size(); ++l) {
      extrapolated[l] = next_costs[l] + coefficient * (next_costs[l] - result.costs[l]);
      // The extrapolation point may dip below the floor (handled by the
      // extended conjugate) but must stay positive for the route-choice
      // fixed point to exist.
      extrapolated[l] = std::max(extrapolated[l], 1e-3 * free_flow[l]);
    }

    bool restarted = false;
    if (momentum.j >= options.k_min && objective_next < objective_at_c) {
      momentum.j = 0;
      momentum.t = 1.0;
      restarted = true;
      if (options.restart_resets_extrapolation) extrapolated = next_costs;
    } else {
      ++momentum.j;
      momentum.t = t_next;
    }

    const double previous_objective = objective_at_c;
    result.costs = next_costs;
    objective_at_c = objective_next;
    result.dual_objective = objective_next;

    DualTraceRow row;
    row.iter = m + 1;
    row.elapsed_seconds = seconds_since(start);
    row.dual_objective = objective_next;
    row.step_size = s;
    row.restarted = restarted;
    row.backtrack_count = backtrack_count;
    row.eta_c = options.reference_costs
                    ? max_relative_deviation(result.costs, *options.reference_costs)
                    : std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(row);
    if (options.record_costs) result.cost_history.push_back(result.costs);
    result.iterations = m + 1;

    if (options.objective_tol > 0.0 &&
        std::abs(objective_next - previous_objective) <=
            options.objective_tol * std::max(1.0, std::abs(objective_next))) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace ngev
