#pragma once

#include <span>
#include <vector>

namespace ngev {

/// One row per solver iteration, recorded after the update.
struct PrimalTraceRow {
  int iter = 0;
  double elapsed_seconds = 0.0;
  double objective = 0.0;
  double eta_x = 0.0;  // NaN when no reference flows were supplied
  double gamma = 0.0;
  bool line_search_fallback = false;
};

struct DualTraceRow {
  int iter = 0;
  double elapsed_seconds = 0.0;
  double dual_objective = 0.0;
  double eta_c = 0.0;  // NaN when no reference costs were supplied
  double step_size = 0.0;
  bool restarted = false;
  int backtrack_count = 0;
};

/// max_l |current_l - reference_l| / reference_l, skipping links whose
/// reference value is below `floor` (the relative gap is undefined there).
double max_relative_deviation(std::span<const double> current,
                              std::span<const double> reference, double floor = 1e-9);

}  // namespace ngev
