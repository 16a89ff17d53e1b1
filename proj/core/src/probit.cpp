#include "ngev/probit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ngev/errors.hpp"
#include "ngev/shortest_path.hpp"
#include "ngev/trace.hpp"

namespace ngev {

namespace {

std::vector<double> one_draw(const Network& network, std::span<const double> costs,
                             const DemandTable& demand, double variance_scale,
                             double cost_floor, std::mt19937_64& rng) {
  const auto links = static_cast<std::size_t>(network.link_count());
  std::vector<double> sampled(links);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t l = 0; l < links; ++l) {
    const double sigma = std::sqrt(variance_scale * network.free_flow_cost[l]);
    sampled[l] = std::max(cost_floor, costs[l] + sigma * unit(rng));
  }
  std::vector<double> flows(links, 0.0);
  for (NodeId d : demand.destinations()) {
    const auto x = all_or_nothing(network.graph, sampled, demand.demand(d), d);
    for (std::size_t l = 0; l < links; ++l) flows[l] += x[l];
  }
  return flows;
}

}  // namespace

std::vector<double> probit_load(const Network& network, std::span<const double> costs,
                                const DemandTable& demand, const ProbitOptions& options,
                                const ProbitDrawSink& sink) {
  if (options.draws < 1) fail(ErrorCategory::validation, "probit needs at least one draw");
  if (!(options.variance_scale > 0.0)) {
    fail(ErrorCategory::validation, "probit variance scale must be positive");
  }
  const auto links = static_cast<std::size_t>(network.link_count());
  std::mt19937_64 rng(options.seed);
  std::vector<double> mean(links, 0.0);
  for (int r = 0; r < options.draws; ++r) {
    const auto flows =
        one_draw(network, costs, demand, options.variance_scale, options.cost_floor, rng);
    if (sink) sink(r, flows);
    for (std::size_t l = 0; l < links; ++l) mean[l] += flows[l];
  }
  for (std::size_t l = 0; l < links; ++l) mean[l] /= options.draws;
  return mean;
}

ProbitErrorCurve probit_error_curve(const Network& network, std::span<const double> costs,
                                    const DemandTable& demand, std::span<const int> draw_counts,
                                    int reference_draws, double variance_scale,
                                    std::uint64_t seed) {
  for (int r : draw_counts) {
    if (r < 1 || r > reference_draws) {
      fail(ErrorCategory::validation, "draw counts must lie in [1, reference]");
    }
  }
  const auto links = static_cast<std::size_t>(network.link_count());
  std::vector<int> checkpoints(draw_counts.begin(), draw_counts.end());
  std::sort(checkpoints.begin(), checkpoints.end());

  // Single stream of draws; checkpoints are prefix means of the reference run.
  std::mt19937_64 rng(seed);
  std::vector<double> running(links, 0.0);
  std::vector<std::vector<double>> prefix_means;
  prefix_means.reserve(checkpoints.size());
  std::size_t next_checkpoint = 0;
  for (int r = 1; r <= reference_draws; ++r) {
    const auto flows = one_draw(network, costs, demand, variance_scale, 1e-6, rng);
    for (std::size_t l = 0; l < links; ++l) running[l] += flows[l];
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == r) {
      std::vector<double> mean(links);
      for (std::size_t l = 0; l < links; ++l) mean[l] = running[l] / r;
      prefix_means.push_back(std::move(mean));
      ++next_checkpoint;
    }
  }
  std::vector<double> reference(links);
  for (std::size_t l = 0; l < links; ++l) reference[l] = running[l] / reference_draws;

  ProbitErrorCurve curve;
  curve.reference_draws = reference_draws;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    curve.draws.push_back(checkpoints[c]);
    curve.max_relative_error.push_back(
        max_relative_deviation(prefix_means[c], reference));
  }
  return curve;
}

}  // namespace ngev
