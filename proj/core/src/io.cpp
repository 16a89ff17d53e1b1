#include "ngev/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ngev/errors.hpp"

namespace ngev {
namespace io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write " + path);
  return out;
}

void write_metadata(std::ofstream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) {
    out << "# " << key << " = " << value << "\n";
  }
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_network_csv(const std::string& path, const Network& network,
                       const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "tail_id,head_id,free_flow_cost,capacity\n";
  for (LinkId l = 0; l < network.link_count(); ++l) {
    const Link& e = network.graph.link(l);
    out << network.external_id(e.tail) << "," << network.external_id(e.head) << ","
        << cell(network.free_flow_cost[static_cast<std::size_t>(l)]) << ","
        << cell(network.capacity[static_cast<std::size_t>(l)]) << "\n";
  }
}

void write_commodity_flows_csv(const std::string& path, const Network& network,
                               std::span<const Commodity> commodities, const FlowState& flows,
                               const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "tail_id,head_id,destination_id,origin_id,flow\n";
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    const auto& x = flows.per_commodity[c];
    for (LinkId l = 0; l < network.link_count(); ++l) {
      const double f = x[static_cast<std::size_t>(l)];
      if (f == 0.0) continue;
      const Link& e = network.graph.link(l);
      out << network.external_id(e.tail) << "," << network.external_id(e.head) << ","
          << network.external_id(commodities[c].destination) << ",";
      if (commodities[c].origin) {
        out << network.external_id(*commodities[c].origin);
      }
      out << "," << cell(f) << "\n";
    }
  }
}

void write_aggregate_flows_csv(const std::string& path, const Network& network,
                               std::span<const double> flows, const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "tail_id,head_id,flow\n";
  for (LinkId l = 0; l < network.link_count(); ++l) {
    const Link& e = network.graph.link(l);
    out << network.external_id(e.tail) << "," << network.external_id(e.head) << ","
        << cell(flows[static_cast<std::size_t>(l)]) << "\n";
  }
}

void write_costs_csv(const std::string& path, const Network& network,
                     std::span<const double> costs, const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "tail_id,head_id,cost\n";
  for (LinkId l = 0; l < network.link_count(); ++l) {
    const Link& e = network.graph.link(l);
    out << network.external_id(e.tail) << "," << network.external_id(e.head) << ","
        << cell(costs[static_cast<std::size_t>(l)]) << "\n";
  }
}

void write_mu_csv(const std::string& path, const Network& network, NodeId destination,
                  const std::vector<double>& mu, const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "node_id,destination_id,mu\n";
  for (NodeId i = 0; i < network.node_count(); ++i) {
    out << network.external_id(i) << "," << network.external_id(destination) << ","
        << cell(mu[static_cast<std::size_t>(i)]) << "\n";
  }
}

void write_primal_trace_csv(const std::string& path, const std::vector<PrimalTraceRow>& rows,
                            const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "iter,elapsed_seconds,objective,eta_x,gamma,line_search_fallback\n";
  for (const auto& r : rows) {
    out << r.iter << "," << cell(r.elapsed_seconds) << "," << cell(r.objective) << ","
        << cell(r.eta_x) << "," << cell(r.gamma) << "," << (r.line_search_fallback ? 1 : 0)
        << "\n";
  }
}

void write_dual_trace_csv(const std::string& path, const std::vector<DualTraceRow>& rows,
                          const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "iter,elapsed_seconds,dual_objective,eta_c,step_size,restarted,backtrack_count\n";
  for (const auto& r : rows) {
    out << r.iter << "," << cell(r.elapsed_seconds) << "," << cell(r.dual_objective) << ","
        << cell(r.eta_c) << "," << cell(r.step_size) << "," << (r.restarted ? 1 : 0) << ","
        << r.backtrack_count << "\n";
  }
}

void write_compare_csv(const std::string& path, const std::vector<LabeledTraceRow>& rows,
                       const Metadata& metadata) {
  auto out = open_out(path);
  write_metadata(out, metadata);
  out << "solver,iter,elapsed_seconds,objective\n";
  for (const auto& r : rows) {
    out << r.solver << "," << r.iter << "," << cell(r.elapsed_seconds) << ","
        << cell(r.objective) << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

}  // namespace io
}  // namespace ngev
