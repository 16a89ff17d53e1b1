#include <doctest.h>

#include <cmath>
#include <random>

#include "ngev/loading.hpp"
#include "ngev/probit.hpp"
#include "ngev/shortest_path.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace ngev;
using namespace ngev::testing;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

LinkId link_of(const Network& net, int tail_ext, int head_ext) {
  const LinkId l = net.graph.find_link(tail_ext - 1, head_ext - 1);
  REQUIRE(l != kNoLink);
  return l;
}

const std::vector<ModelKind> kGevModels = {ModelKind::model1, ModelKind::model2,
                                           ModelKind::model3, ModelKind::model4};

}  // namespace

TEST_CASE("symmetric choices split evenly") {
  const auto net = two_route();
  const auto commodity = make_commodity(net, single_od(4, 0, 3, 1.0), {ModelKind::logit, 1.0});
  const auto mu = expected_min_cost(net, net.free_flow_cost, commodity.algebra, 3);
  const auto p = choice_probabilities(net, net.free_flow_cost, commodity.algebra, mu.mu, 3);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a cost-to-go gap of ln2/theta yields a 2:1 split") {
  const double theta = 1.7;
  const auto net = two_route(std::log(2.0) / theta);
  const auto commodity =
      make_commodity(net, single_od(4, 0, 3, 1.0), {ModelKind::logit, theta});
  const auto mu = expected_min_cost(net, net.free_flow_cost, commodity.algebra, 3,
                                    {.tol = 1e-13});
  const auto p = choice_probabilities(net, net.free_flow_cost, commodity.algebra, mu.mu, 3);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("both probability forms agree") {
  const auto inst = cyclic9();
  const auto commodity = make_commodity(inst.network, inst.demand, {ModelKind::model3, 1.0});
  const auto mu = expected_min_cost(inst.network, inst.network.free_flow_cost,
                                    commodity.algebra, 8, {.tol = 1e-14});
  const auto p = choice_probabilities(inst.network, inst.network.free_flow_cost,
                                      commodity.algebra, mu.mu, 8);
  // Raw exponential form, without the normalization by the choice sum.
  const Graph& g = inst.network.graph;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (i == 8 || !std::isfinite(mu.mu[static_cast<std::size_t>(i)])) continue;
    const double theta = commodity.algebra.node_theta(i);
    for (LinkId l : g.out_links(i)) {
      const double raw =
          commodity.algebra.alpha(l) *
          std::exp(-theta * (inst.network.free_flow_cost[static_cast<std::size_t>(l)] +
                             mu.mu[static_cast<std::size_t>(g.link(l).head)] -
                             mu.mu[static_cast<std::size_t>(i)]));
      CHECK(std::abs(raw - p[static_cast<std::size_t>(l)]) <= 1e-12);
    }
  }
}

TEST_CASE("probabilities normalize at every node that reaches the destination") {
  const auto inst = sioux_falls();
  const auto commodities = plan_commodities(inst.network, inst.demand, {ModelKind::model3});
  const auto& commodity = commodities.front();
  const auto mu = expected_min_cost(inst.network, inst.network.free_flow_cost,
                                    commodity.algebra, commodity.destination);
  const auto p = choice_probabilities(inst.network, inst.network.free_flow_cost,
                                      commodity.algebra, mu.mu, commodity.destination);
  const Graph& g = inst.network.graph;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (i == commodity.destination) continue;
    double sum = 0.0;
    for (LinkId l : g.out_links(i)) sum += p[static_cast<std::size_t>(l)];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("node flows on a single path") {
  const auto net = make_network(3, {{0, 1}, {1, 2}}, {1.0, 1.0});
  const auto commodity = make_commodity(net, single_od(3, 0, 2, 1.0), {ModelKind::logit, 1.0});
  const auto loaded = load_commodity(net, net.free_flow_cost, commodity, LoadingMethod::mta);
  CHECK(loaded.link_flows[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loaded.link_flows[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cyclic re-entry pushes the hub inflow above the OD flow") {
  const auto inst = cyclic9();
  const auto commodity = make_commodity(inst.network, inst.demand, {ModelKind::model1});
  const auto loaded =
      load_commodity(inst.network, inst.network.free_flow_cost, commodity, LoadingMethod::mta);
  const double into_hub = loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 2, 5))] +
                          loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 4, 5))] +
                          loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 8, 5))] +
                          loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 6, 5))];
  CHECK(into_hub > 1.0);
  CHECK(loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 8, 5))] > 0.0);
  CHECK(loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 6, 5))] > 0.0);
}

TEST_CASE("Markovian loading equals path enumeration on random acyclic networks") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    const auto net = random_dag(rng, 4 + static_cast<int>(rng() % 7));
    const auto demand = single_od(net.network.node_count(), net.origin, net.destination, 1.0);
    for (ModelKind kind : kGevModels) {
      const auto commodity = make_commodity(net.network, demand, {kind});
      const auto loaded = load_commodity(net.network, net.network.free_flow_cost, commodity,
                                         LoadingMethod::mta);
      const auto oracle = enumerate_path_flows(net.network, net.network.free_flow_cost,
                                               commodity.algebra, net.origin, net.destination,
                                               1.0, 0);
      CHECK(oracle.truncated_mass <= 1e-12);
      CHECK(sup_diff(loaded.link_flows, oracle.link_flows) <= 1e-10);
    }
  }
}

TEST_CASE("logit path products match the route-cost form on acyclic networks") {
  std::mt19937_64 rng(53);
  const double theta = 1.3;
  for (int rep = 0; rep < 8; ++rep) {
    const auto net = random_dag(rng, 8);
    const auto demand = single_od(net.network.node_count(), net.origin, net.destination, 1.0);
    const auto commodity = make_commodity(net.network, demand, {ModelKind::logit, theta});
    const auto loaded = load_commodity(net.network, net.network.free_flow_cost, commodity,
                                       LoadingMethod::mta);
    const auto oracle = logit_path_flows(net.network, net.network.free_flow_cost, theta,
                                         net.origin, net.destination, 1.0);
    CHECK(sup_diff(loaded.link_flows, oracle) <= 1e-10);
  }
}

TEST_CASE("strict-descent loading zeroes the inefficient corner") {
  const auto inst = cyclic9();
  for (ModelKind kind : kGevModels) {
    const auto commodity = make_commodity(inst.network, inst.demand, {kind});
    const auto loaded = load_commodity(inst.network, inst.network.free_flow_cost, commodity,
                                       LoadingMethod::dial);
    for (auto [tail, head] : std::vector<std::pair<int, int>>{{4, 7}, {7, 8}, {5, 8}, {8, 9}}) {
      CHECK(loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, tail, head))] ==
            0.0);
    }
    CHECK(loaded.link_flows[static_cast<std::size_t>(link_of(inst.network, 6, 9))] ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("strict-descent loading never uses non-improving links") {
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 6; ++rep) {
    const auto net = random_cyclic(rng, 12);
    const auto demand = single_od(net.network.node_count(), net.origin, net.destination, 1.0);
    const auto commodity = make_commodity(net.network, demand, {ModelKind::model3});
    const auto loaded = load_commodity(net.network, net.network.free_flow_cost, commodity,
                                       LoadingMethod::dial);
    const auto dist =
        sp_distances_to(net.network.graph, net.network.free_flow_cost, net.destination);
    for (LinkId l = 0; l < net.network.link_count(); ++l) {
      const Link& e = net.network.graph.link(l);
      if (!(dist[static_cast<std::size_t>(e.head)] < dist[static_cast<std::size_t>(e.tail)])) {
        CHECK(loaded.link_flows[static_cast<std::size_t>(l)] == 0.0);
      }
    }
  }
}

TEST_CASE("the GEV formulation dampens cycling compared with plain logit") {
  const auto inst = cyclic9();
  const auto logit_load = load_commodity(
      inst.network, inst.network.free_flow_cost,
      make_commodity(inst.network, inst.demand, {ModelKind::model1}), LoadingMethod::mta);
  const LinkId back_a = link_of(inst.network, 8, 5);
  const LinkId back_b = link_of(inst.network, 6, 5);
  for (ModelKind kind : {ModelKind::model2, ModelKind::model3, ModelKind::model4}) {
    const auto loaded = load_commodity(inst.network, inst.network.free_flow_cost,
                                       make_commodity(inst.network, inst.demand, {kind}),
                                       LoadingMethod::mta);
    CHECK(loaded.link_flows[static_cast<std::size_t>(back_a)] <
          logit_load.link_flows[static_cast<std::size_t>(back_a)]);
    CHECK(loaded.link_flows[static_cast<std::size_t>(back_b)] <
          logit_load.link_flows[static_cast<std::size_t>(back_b)]);
  }
}

TEST_CASE("logit loading equals unit-parameter GEV loading") {
  const auto check_network = [](const Network& network, const DemandTable& demand) {
    const auto logit_c = plan_commodities(network, demand, {ModelKind::logit, 1.0});
    const auto gev_c = plan_commodities(network, demand, {ModelKind::model1});
    for (std::size_t c = 0; c < logit_c.size(); ++c) {
      for (LoadingMethod method : {LoadingMethod::mta, LoadingMethod::dial}) {
        const auto a = load_commodity(network, network.free_flow_cost, logit_c[c], method);
        const auto b = load_commodity(network, network.free_flow_cost, gev_c[c], method);
        CHECK(sup_diff(a.link_flows, b.link_flows) <= 1e-12);
      }
    }
  };
  const auto inst = cyclic9();
  check_network(inst.network, inst.demand);
  const auto sf = sioux_falls();
  check_network(sf.network, sf.demand);
}

TEST_CASE("two-route split sharpens monotonically with the scale") {
  const double gap = 0.3;
  const auto net = two_route(gap);
  double previous = 0.5;
  for (double theta : {0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) {
    const auto commodity =
        make_commodity(net, single_od(4, 0, 3, 1.0), {ModelKind::logit, theta});
    const auto loaded = load_commodity(net, net.free_flow_cost, commodity, LoadingMethod::mta);
    const double share = loaded.link_flows[0];
    CHECK(share > previous);
    previous = share;
  }
  CHECK(previous > 0.999);
}

TEST_CASE("full assignment on Sioux Falls conserves flow per destination") {
  const auto inst = sioux_falls();
  const auto commodities = plan_commodities(inst.network, inst.demand, {ModelKind::model3});
  const auto state = assign_all(inst.network, inst.network.free_flow_cost, commodities,
                                LoadingMethod::mta);
  double worst = 0.0;
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    worst = std::max(worst,
                     conservation_residual(inst.network, state.per_commodity[c], commodities[c]));
  }
  CHECK(worst <= 1e-9 * inst.demand.total_flow());
  // Aggregation is the exact commodity sum.
  std::vector<double> sum(static_cast<std::size_t>(inst.network.link_count()), 0.0);
  for (const auto& x : state.per_commodity) {
    for (std::size_t l = 0; l < sum.size(); ++l) sum[l] += x[l];
  }
  CHECK(sup_diff(sum, state.aggregate) == 0.0);
}

TEST_CASE("empty demand loads nothing") {
  const auto inst = cyclic9();
  const auto state = assign_all(inst.network, inst.network.free_flow_cost, {},
                                LoadingMethod::mta);
  for (double x : state.aggregate) CHECK(x == 0.0);
}

TEST_CASE("mirror-image destinations receive mirror-image flows") {
  // Symmetric line o <- m -> o with two destinations at the ends.
  const auto net = make_network(3, {{1, 0}, {1, 2}}, {1.0, 1.0});
  DemandTable demand(3);
  demand.add(1, 0, 2.0);
  demand.add(1, 2, 2.0);
  const auto commodities = plan_commodities(net, demand, {ModelKind::logit, 1.0});
  const auto state = assign_all(net, net.free_flow_cost, commodities, LoadingMethod::mta);
  CHECK(state.per_commodity[0][0] == doctest::Approx(state.per_commodity[1][1]));
}

TEST_CASE("demand toward an unreachable destination is rejected") {
  const auto net = make_network(3, {{0, 1}}, {1.0});
  const auto commodity = make_commodity(net, single_od(3, 0, 1, 1.0), {ModelKind::logit, 1.0});
  Commodity bad = commodity;
  bad.destination = 2;
  bad.demand = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(
      (void)load_commodity(net, net.free_flow_cost, bad, LoadingMethod::mta), Error);
}

TEST_CASE("path enumeration") {
  SUBCASE("acyclic enumeration is complete") {
    std::mt19937_64 rng(61);
    const auto net = random_dag(rng, 9);
    const auto commodity = make_commodity(
        net.network, single_od(net.network.node_count(), net.origin, net.destination, 1.0),
        {ModelKind::logit, 1.0});
    const auto result = enumerate_path_flows(net.network, net.network.free_flow_cost,
                                             commodity.algebra, net.origin, net.destination,
                                             1.0, 0);
    CHECK(result.enumerated_mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single path has probability one") {
    const auto net = make_network(3, {{0, 1}, {1, 2}}, {1.0, 1.0});
    const auto commodity =
        make_commodity(net, single_od(3, 0, 2, 1.0), {ModelKind::logit, 1.0});
    const auto result = enumerate_path_flows(net, net.free_flow_cost, commodity.algebra, 0, 2,
                                             1.0, 0);
    CHECK(result.path_count == 1);
    CHECK(result.enumerated_mass == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("truncation error shrinks with the loop budget on the cyclic example") {
    const auto inst = cyclic9();
    const auto commodity = make_commodity(inst.network, inst.demand, {ModelKind::model1});
    const auto loaded = load_commodity(inst.network, inst.network.free_flow_cost, commodity,
                                       LoadingMethod::mta);
    double previous_error = kInfinity;
    double previous_mass = kInfinity;
    for (int loops : {3, 6, 9}) {
      const auto result =
          enumerate_path_flows(inst.network, inst.network.free_flow_cost, commodity.algebra,
                               0, 8, 1.0, loops);
      const double err = sup_diff(loaded.link_flows, result.link_flows);
      CHECK(result.truncated_mass < previous_mass);
      CHECK(err <= previous_error + 1e-15);
      CHECK(err <= result.truncated_mass * (result.max_path_length + 20.0) + 1e-10);
      previous_error = err;
      previous_mass = result.truncated_mass;
    }
  }
  SUBCASE("a tiny path budget raises an infeasible error") {
    const auto inst = cyclic9();
    const auto commodity = make_commodity(inst.network, inst.demand, {ModelKind::model1});
    CHECK_THROWS_AS(
        (void)enumerate_path_flows(inst.network, inst.network.free_flow_cost,
                                   commodity.algebra, 0, 8, 1.0, 9, 10),
        Error);
  }
}

TEST_CASE("probit loading") {
  const auto grid = generate_grid(1, 1.0, 0.1);
  SUBCASE("fixed seeds reproduce bit-identical flows") {
    const ProbitOptions opts{.draws = 25, .variance_scale = 0.3, .seed = 99};
    const auto a = probit_load(grid.network, grid.network.free_flow_cost, grid.demand, opts);
    const auto b = probit_load(grid.network, grid.network.free_flow_cost, grid.demand, opts);
    CHECK(a == b);
  }
  SUBCASE("one draw equals the assignment on the sampled costs") {
    std::vector<double> captured;
    const ProbitOptions opts{.draws = 1, .variance_scale = 0.3, .seed = 7};
    const auto mean =
        probit_load(grid.network, grid.network.free_flow_cost, grid.demand, opts,
                    [&](int, std::span<const double> flows) {
                      captured.assign(flows.begin(), flows.end());
                    });
    CHECK(sup_diff(mean, captured) == 0.0);
  }
  SUBCASE("vanishing variance recovers the deterministic assignment") {
    std::mt19937_64 rng(71);
    const auto net = random_dag(rng, 8);
    DemandTable demand(net.network.node_count());
    demand.add(net.origin, net.destination, 3.0);
    std::vector<double> aon(static_cast<std::size_t>(net.network.link_count()), 0.0);
    for (NodeId d : demand.destinations()) {
      const auto x =
          all_or_nothing(net.network.graph, net.network.free_flow_cost, demand.demand(d), d);
      for (std::size_t l = 0; l < aon.size(); ++l) aon[l] += x[l];
    }
    const ProbitOptions opts{.draws = 5, .variance_scale = 1e-24, .seed = 3};
    const auto mean = probit_load(net.network, net.network.free_flow_cost, demand, opts);
    CHECK(sup_diff(mean, aon) <= 1e-9);
  }
  SUBCASE("error against the long-run reference shrinks with draws") {
    const std::vector<int> checkpoints = {10, 100, 400};
    const auto curve = probit_error_curve(grid.network, grid.network.free_flow_cost,
                                          grid.demand, checkpoints, 400, 0.3, 12345);
    CHECK(curve.max_relative_error[0] > curve.max_relative_error[1]);
    CHECK(curve.max_relative_error[1] > curve.max_relative_error[2]);
    CHECK(curve.max_relative_error[2] == 0.0);
  }
}

TEST_CASE("sampled walks are reproducible and mostly acyclic here") {
  const auto inst = cyclic9();
  const auto commodity = make_commodity(inst.network, inst.demand, {ModelKind::model3});
  const auto loaded =
      load_commodity(inst.network, inst.network.free_flow_cost, commodity, LoadingMethod::mta);
  const auto a = sample_paths(inst.network, loaded.probabilities, 0, 8, 2000, 42);
  const auto b = sample_paths(inst.network, loaded.probabilities, 0, 8, 2000, 42);
  CHECK(a.unique_paths == b.unique_paths);
  CHECK(a.cyclic_paths == b.cyclic_paths);
  CHECK(a.sampled == 2000);
  CHECK(a.truncated == 0);
  CHECK(a.unique_paths >= 4);
  CHECK(a.cyclic_paths < a.sampled / 2);
}
