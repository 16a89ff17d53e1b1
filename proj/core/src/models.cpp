#include "ngev/models.hpp"

#include <cmath>
#include <numbers>

#include "ngev/shortest_path.hpp"

namespace ngev {

ModelKind parse_model_kind(const std::string& name) {
  if (name == "sp") return ModelKind::sp;
  if (name == "logit") return ModelKind::logit;
  if (name == "model1") return ModelKind::model1;
  if (name == "model2") return ModelKind::model2;
  if (name == "model3") return ModelKind::model3;
  if (name == "model4") return ModelKind::model4;
  fail(ErrorCategory::config, "unknown model '" + name + "'");
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sp: return "sp";
    case ModelKind::logit: return "logit";
    case ModelKind::model1: return "model1";
    case ModelKind::model2: return "model2";
    case ModelKind::model3: return "model3";
    case ModelKind::model4: return "model4";
  }
  return "?";
}

DestParams make_model_params(ModelKind kind, const Network& network,
                             std::span<const double> sp_to_dest, NodeId destination,
                             std::optional<NodeId> origin) {
  const Graph& graph = network.graph;
  const auto n = static_cast<std::size_t>(graph.node_count());
  if (sp_to_dest.size() != n) fail(ErrorCategory::validation, "distance table size mismatch");

  DestParams params;
  params.theta.assign(n, 1.0);
  params.alpha.assign(static_cast<std::size_t>(graph.link_count()), 1.0);

  if (kind == ModelKind::model1) return params;
  if (kind != ModelKind::model2 && kind != ModelKind::model3 && kind != ModelKind::model4) {
    fail(ErrorCategory::config, "not a network-GEV model kind");
  }

  for (LinkId l = 0; l < graph.link_count(); ++l) {
    const NodeId head = graph.link(l).head;
    params.alpha[static_cast<std::size_t>(l)] = 1.0 / graph.in_degree(head);
  }

  double origin_distance = 0.0;
  if (kind == ModelKind::model2) {
    if (!origin) fail(ErrorCategory::config, "model2 scales are OD-specific; origin required");
    origin_distance = sp_to_dest[static_cast<std::size_t>(*origin)];
    if (!std::isfinite(origin_distance) || origin_distance <= 0.0) {
      fail(ErrorCategory::unreachable, "origin cannot reach the destination");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<NodeId>(i) == destination) {
      // D^d(d) = 0 makes the formulas singular; no choice happens at the
      // destination, so the scale there is never used.
      params.theta[i] = 1.0;
      continue;
    }
    const double dist = sp_to_dest[i];
    if (!std::isfinite(dist)) continue;  // unreachable, scale never used
    if (dist <= 0.0) {
      fail(ErrorCategory::validation, "zero shortest-path distance away from the destination");
    }
    switch (kind) {
      case ModelKind::model2: params.theta[i] = origin_distance / dist; break;
      case ModelKind::model3: params.theta[i] = std::numbers::pi / std::sqrt(3.0 * dist); break;
      case ModelKind::model4: params.theta[i] = std::numbers::pi / std::sqrt(6.0 * dist); break;
      default: break;
    }
  }
  return params;
}

std::vector<Commodity> plan_commodities(const Network& network, const DemandTable& demand,
                                        const ModelSpec& spec) {
  std::vector<Commodity> out;
  const auto n = static_cast<std::size_t>(network.node_count());
  for (NodeId d : demand.destinations()) {
    const auto& q = demand.demand(d);
    switch (spec.kind) {
      case ModelKind::sp:
        out.push_back({d, std::nullopt, q, Algebra::shortest_path()});
        break;
      case ModelKind::logit:
        out.push_back({d, std::nullopt, q, Algebra::logit(spec.logit_theta)});
        break;
      case ModelKind::model1:
      case ModelKind::model3:
      case ModelKind::model4: {
        const auto dist = sp_distances_to(network.graph, network.free_flow_cost, d);
        out.push_back({d, std::nullopt, q,
                       Algebra::ngev(make_model_params(spec.kind, network, dist, d))});
        break;
      }
      case ModelKind::model2: {
        const auto dist = sp_distances_to(network.graph, network.free_flow_cost, d);
        for (NodeId o : demand.origins(d)) {
          std::vector<double> qo(n, 0.0);
          qo[static_cast<std::size_t>(o)] = q[static_cast<std::size_t>(o)];
          out.push_back({d, o, std::move(qo),
                         Algebra::ngev(make_model_params(spec.kind, network, dist, d, o))});
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace ngev
