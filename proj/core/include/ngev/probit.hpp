#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ngev/network.hpp"

namespace ngev {

struct ProbitOptions {
  int draws = 100;
  double variance_scale = 0.3;  // per-link normal variance is scale * free-flow cost
  std::uint64_t seed = 0;
  double cost_floor = 1e-6;
};

/// Called after each draw with the all-or-nothing aggregate flows of that
/// draw; used to stream per-draw traces without storing them.
using ProbitDrawSink = std::function<void(int draw, std::span<const double> link_flows)>;

/// Monte-Carlo probit loading: each draw perturbs every link cost with an
/// independent normal (mean c_ij, variance variance_scale * cbar_ij,
/// floored at cost_floor), performs deterministic shortest-path assignment
/// of the whole demand table, and the result is the mean over draws.
/// Reproducible for a fixed seed.
std::vector<double> probit_load(const Network& network, std::span<const double> costs,
                                const DemandTable& demand, const ProbitOptions& options,
                                const ProbitDrawSink& sink = {});

struct ProbitErrorCurve {
  std::vector<int> draws;
  std::vector<double> max_relative_error;
  int reference_draws = 0;
};

/// Approximation error of the draw-average flows against a reference
/// computed from `reference_draws` draws of the same stream: the error at
/// R is max over links of |X(R) - X(ref)| / X(ref), links with negligible
/// reference flow excluded.
ProbitErrorCurve probit_error_curve(const Network& network, std::span<const double> costs,
                                    const DemandTable& demand, std::span<const int> draw_counts,
                                    int reference_draws, double variance_scale,
                                    std::uint64_t seed);

}  // namespace ngev
