#include "ngev/trace.hpp"

#include <algorithm>
#include <cmath>

#include "ngev/errors.hpp"

namespace ngev {

double max_relative_deviation(std::span<const double> current,
                              std::span<const double> reference, double floor) {
  if (current.size() != reference.size()) {
    fail(ErrorCategory::validation, "deviation vectors differ in size");
  }
  double worst = 0.0;
  for (std::size_t l = 0; l < current.size(); ++l) {
    if (!(reference[l] > floor)) continue;
    worst = std::max(worst, std::abs(current[l] - reference[l]) / reference[l]);
  }
  return worst;
}

}  // namespace ngev
