#pragma once

#include <vector>

#include "ngev/primal.hpp"

namespace ngev {

/// Warm-start cache for the per-commodity expected-minimum-cost tables; the
/// fixed point is unique, so reusing the previous tables only saves sweeps.
using MuCache = LoadContext;

/// Z_D(c) = -C*(c) + sum_d mu^d(c) . q~^d, the concave objective maximized
/// over c >= cbar. mu^d(c) is recomputed through the loading machinery.
double dual_objective(const AssignmentProblem& problem, std::span<const double> costs,
                      MuCache* cache = nullptr, double mu_tol = 1e-10);

/// grad Z_D(c) = X(c) - c^{-1}(c): loaded flows at c minus the flows the
/// cost vector implies. Optionally also reports Z_D(c), which comes for
/// free from the same mu tables.
std::vector<double> dual_gradient(const AssignmentProblem& problem, std::span<const double> costs,
                                  double* objective_out = nullptr, MuCache* cache = nullptr,
                                  double mu_tol = 1e-10);

/// Elementwise <a>_{cbar+}: max(a_ij, cbar_ij).
std::vector<double> project_to_feasible_costs(std::span<const double> candidate,
                                              std::span<const double> free_flow);

struct DualOptions {
  double step_size = 1e-5;        // fixed step (GP, and AGP without backtracking)
  double initial_step = 1e-4;     // s0 when backtracking
  bool backtracking = true;
  double backtrack_xi = 0.25;     // step shrink factor, 0 < xi < 1
  /// Each search starts this many shrink notches above the last accepted
  /// step (never beyond s0). With 0 the schedule is non-increasing and
  /// stays pinned at whatever the harshest transient allowed.
  int step_recovery = 2;
  int k_min = 50;                 // minimum momentum run before a restart may fire
  /// On restart, also pull the extrapolation point back onto the iterate.
  bool restart_resets_extrapolation = false;
  int max_iter = 400;
  double objective_tol = 1e-8;    // relative dual-objective change stopping rule
  double mu_tol = 1e-10;
  double step_floor = 1e-15;      // below this the backtracking search stalls
  const std::vector<double>* reference_costs = nullptr;  // for the eta_c column
  bool record_costs = false;
};

struct DualResult {
  std::vector<double> costs;
  double dual_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<DualTraceRow> trace;
  std::vector<std::vector<double>> cost_history;
};

/// Raised when the step-size search shrinks below the floor: certified
/// progress has fallen under the objective-evaluation noise. Carries the
/// partial run as a diagnostic.
class StallError : public Error {
 public:
  StallError(const std::string& message, DualResult partial)
      : Error(ErrorCategory::stall, message), partial_(std::move(partial)) {}
  const DualResult& partial() const noexcept { return partial_; }

 private:
  DualResult partial_;
};

/// Plain projected gradient ascent with a fixed step size.
DualResult solve_gp(const AssignmentProblem& problem, const DualOptions& options = {});

/// Accelerated gradient projection: Nesterov momentum on the projected
/// ascent step, function-scheme adaptive restart once the momentum run
/// exceeds k_min, and optional backtracking step-size search with the
/// quadratic upper-model acceptance test (run on -Z_D, the minimization
/// form). The accepted step carries over to the next iteration, so the
/// schedule is non-increasing.
DualResult solve_agp(const AssignmentProblem& problem, const DualOptions& options = {});

}  // namespace ngev
