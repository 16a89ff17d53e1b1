#pragma once

#include <vector>

#include "ngev/bpr.hpp"
#include "ngev/loading.hpp"
#include "ngev/models.hpp"
#include "ngev/trace.hpp"

namespace ngev {

/// A complete equilibrium instance: network, flow-dependent cost model and
/// the commodities of the chosen route-choice model.
struct AssignmentProblem {
  const Network* network = nullptr;
  BprModel cost_model;
  std::vector<Commodity> commodities;

  double total_demand() const {
    double t = 0.0;
    for (const auto& c : commodities) t += c.total_demand();
    return t;
  }
};

AssignmentProblem make_problem(const Network& network, const DemandTable& demand,
                               const ModelSpec& spec);

/// Node entropy H^d_i = -sum_{j in F(i)} x_ij ln(x_ij / (alpha_ji z_i))
/// with z_i = sum_j x_ij; zero-flow terms contribute nothing.
std::vector<double> node_entropy(const Network& network, const std::vector<double>& link_flows,
                                 const Algebra& algebra);

/// Z_P = C(X) - sum_d theta_hat^d . H^d(x^d): the objective the flow-based
/// solvers descend. Strictly convex over the feasible region.
double primal_objective(const AssignmentProblem& problem, const FlowState& flows);

struct PrimalOptions {
  int max_iter = 250;
  double objective_tol = 1e-8;        // relative objective change stopping rule
  double line_search_tol = 1e-3;      // golden-section interval width
  const std::vector<double>* reference_flows = nullptr;  // for the eta_x column
  bool record_flows = false;          // keep per-iteration aggregate flows
  const FlowState* initial = nullptr; // feasible warm start; free-flow loading otherwise
};

struct PrimalResult {
  FlowState flows;
  std::vector<double> costs;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<PrimalTraceRow> trace;
  std::vector<std::vector<double>> flow_history;
};

/// Method of successive averages: fixed step 1/(m+1) toward the loading at
/// current costs.
PrimalResult solve_msa(const AssignmentProblem& problem, const PrimalOptions& options = {});

/// Partial linearization: the subproblem at each iterate is one stochastic
/// loading at frozen costs, followed by an exact golden-section line search
/// of the full objective along the loading direction.
PrimalResult solve_pl(const AssignmentProblem& problem, const PrimalOptions& options = {});

}  // namespace ngev
