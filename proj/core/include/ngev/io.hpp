#pragma once

#include <map>
#include <string>
#include <vector>

#include "ngev/loading.hpp"
#include "ngev/models.hpp"
#include "ngev/network.hpp"
#include "ngev/trace.hpp"

namespace ngev {
namespace io {

/// Full-precision decimal rendering (round-trips a double exactly).
std::string format_double(double value);

using Metadata = std::map<std::string, std::string>;

/// CSV files open with `# key = value` comment lines (the run configuration
/// echo), then a header row, then data rows.
void write_network_csv(const std::string& path, const Network& network,
                       const Metadata& metadata = {});

void write_commodity_flows_csv(const std::string& path, const Network& network,
                               std::span<const Commodity> commodities, const FlowState& flows,
                               const Metadata& metadata = {});

void write_aggregate_flows_csv(const std::string& path, const Network& network,
                               std::span<const double> flows, const Metadata& metadata = {});

void write_costs_csv(const std::string& path, const Network& network,
                     std::span<const double> costs, const Metadata& metadata = {});

void write_mu_csv(const std::string& path, const Network& network, NodeId destination,
                  const std::vector<double>& mu, const Metadata& metadata = {});

void write_primal_trace_csv(const std::string& path, const std::vector<PrimalTraceRow>& rows,
                            const Metadata& metadata = {});

void write_dual_trace_csv(const std::string& path, const std::vector<DualTraceRow>& rows,
                          const Metadata& metadata = {});

struct LabeledTraceRow {
  std::string solver;
  int iter = 0;
  double elapsed_seconds = 0.0;
  double objective = 0.0;
};

/// Long-format table aligning several solvers on one instance.
void write_compare_csv(const std::string& path, const std::vector<LabeledTraceRow>& rows,
                       const Metadata& metadata = {});

void write_text_file(const std::string& path, const std::string& content);

}  // namespace io
}  // namespace ngev
