#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ngev/algebra.hpp"
#include "ngev/network.hpp"

namespace ngev {

/// Route-choice model selector. model1..model4 are the network-GEV
/// parameterizations built from shortest-path distances D^d(i) to the
/// destination under free-flow costs:
///   model1: theta_i = 1,                         alpha_ji = 1
///   model2: theta_i = D^d(o) / D^d(i),           alpha_ji = 1/|B(j)|
///   model3: theta_i = pi / sqrt(3 D^d(i)),       alpha_ji = 1/|B(j)|
///   model4: theta_i = pi / sqrt(6 D^d(i)),       alpha_ji = 1/|B(j)|
/// model2 scales depend on the origin, so it plans one commodity per OD
/// pair; the others are destination-based.
enum class ModelKind { sp, logit, model1, model2, model3, model4 };

struct ModelSpec {
  ModelKind kind = ModelKind::model3;
  double logit_theta = 1.0;
};

ModelKind parse_model_kind(const std::string& name);
const char* to_string(ModelKind kind);

/// Builds the network-GEV parameters of one of the four models for a
/// destination. `sp_to_dest` is D^d; model2 additionally needs the origin.
DestParams make_model_params(ModelKind kind, const Network& network,
                             std::span<const double> sp_to_dest, NodeId destination,
                             std::optional<NodeId> origin = std::nullopt);

/// One unit of assignable demand: a destination, an optional origin
/// restriction (per-OD models), the demand vector and the route-choice
/// algebra used to load it.
struct Commodity {
  NodeId destination = 0;
  std::optional<NodeId> origin;
  std::vector<double> demand;
  Algebra algebra = Algebra::shortest_path();

  double total_demand() const {
    double t = 0.0;
    for (double q : demand) t += q;
    return t;
  }
  std::vector<double> modified_demand() const {
    std::vector<double> q = demand;
    q[static_cast<std::size_t>(destination)] = -total_demand();
    return q;
  }
};

/// Expands a demand table into loadable commodities under the chosen model.
/// Model parameters are derived once from free-flow shortest-path distances
/// and stay fixed afterwards, so they are valid across cost updates of an
/// equilibrium solve. Commodities are ordered by ascending destination id
/// (then origin id).
std::vector<Commodity> plan_commodities(const Network& network, const DemandTable& demand,
                                        const ModelSpec& spec);

}  // namespace ngev
