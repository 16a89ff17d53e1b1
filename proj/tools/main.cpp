// Command-line front end: network loading, equilibrium solving and the
// batch experiments, all emitting CSV files with a config echo header.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "ngev/dual.hpp"
#include "ngev/errors.hpp"
#include "ngev/grid.hpp"
#include "ngev/io.hpp"
#include "ngev/loading.hpp"
#include "ngev/primal.hpp"
#include "ngev/probit.hpp"
#include "ngev/tntp.hpp"

namespace {

using namespace ngev;
namespace fs = std::filesystem;

struct InputOptions {
  std::string net_path;
  std::string trips_path;
  int grid_k = 0;
  double grid_ref_flow = 10000.0;
  double grid_decay = 0.1;
  double grid_cost = 1.0;
  double grid_capacity = 10000.0;
  double demand_scale = 1.0;
};

struct ModelOptions {
  std::string model = "model3";
  double theta = 1.0;
  std::string method = "mta";
};

struct SolverOptions {
  std::string solver = "pl";
  int max_iter = 250;
  double tol = 1e-8;
  double line_search_tol = 1e-3;
  double step_size = 1e-5;
  double initial_step = 1e-4;
  int k_min = 50;
  double xi = 0.25;
  bool no_backtracking = false;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  auto* net = cmd->add_option("--net", in.net_path, "TNTP network file");
  auto* trips = cmd->add_option("--trips", in.trips_path, "TNTP trips file");
  net->needs(trips);
  trips->needs(net);
  auto* k = cmd->add_option("--grid-k", in.grid_k, "generate a k x k grid instead of reading files");
  k->excludes(net);
  cmd->add_option("--grid-ref-flow", in.grid_ref_flow, "grid gravity reference flow")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-decay", in.grid_decay, "grid gravity decay")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-cost", in.grid_cost, "grid free-flow link cost")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-capacity", in.grid_capacity, "grid link capacity")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--demand-scale", in.demand_scale, "demand multiplier")
      ->check(CLI::NonNegativeNumber);
}

void add_model_options(CLI::App* cmd, ModelOptions& model) {
  cmd->add_option("--model", model.model, "route-choice model")
      ->check(CLI::IsMember({"sp", "logit", "model1", "model2", "model3", "model4"}));
  cmd->add_option("--theta", model.theta, "logit scale")->check(CLI::PositiveNumber);
  cmd->add_option("--method", model.method, "loading method")
      ->check(CLI::IsMember({"mta", "dial"}));
}

void add_solver_options(CLI::App* cmd, SolverOptions& s, bool with_selector) {
  if (with_selector) {
    cmd->add_option("--solver", s.solver, "equilibrium solver")
        ->check(CLI::IsMember({"msa", "pl", "gp", "agp"}));
  }
  cmd->add_option("--max-iter", s.max_iter, "iteration budget")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", s.tol, "relative objective-change stopping tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--line-search-tol", s.line_search_tol, "golden-section interval width")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--step-size", s.step_size, "fixed dual step size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--initial-step", s.initial_step, "initial backtracking step size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--kmin", s.k_min, "minimum momentum run before adaptive restarts")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--xi", s.xi, "backtracking shrink factor")
      ->check(CLI::Range(1e-9, 0.999999));
  cmd->add_flag("--no-backtracking", s.no_backtracking, "use the fixed dual step size");
}

TntpInstance load_input(const InputOptions& in) {
  TntpInstance instance;
  if (in.grid_k > 0) {
    auto grid = generate_grid(in.grid_k, in.grid_ref_flow, in.grid_decay,
                              {in.grid_cost, in.grid_capacity});
    instance.network = std::move(grid.network);
    instance.demand = std::move(grid.demand);
  } else if (!in.net_path.empty()) {
    instance = load_tntp_files(in.net_path, in.trips_path);
  } else {
    fail(ErrorCategory::config, "no input: pass --net/--trips or --grid-k");
  }
  if (in.demand_scale != 1.0) instance.demand = instance.demand.scaled(in.demand_scale);
  return instance;
}

ModelSpec to_spec(const ModelOptions& model) {
  return ModelSpec{parse_model_kind(model.model), model.theta};
}

io::Metadata base_metadata(const InputOptions& in, const ModelOptions* model,
                           const SolverOptions* solver) {
  io::Metadata meta;
  if (in.grid_k > 0) {
    meta["input"] = "grid k=" + std::to_string(in.grid_k);
    meta["grid_ref_flow"] = io::format_double(in.grid_ref_flow);
    meta["grid_decay"] = io::format_double(in.grid_decay);
  } else {
    meta["input"] = in.net_path + " + " + in.trips_path;
  }
  meta["demand_scale"] = io::format_double(in.demand_scale);
  if (model) {
    meta["model"] = model->model;
    if (model->model == "logit") meta["theta"] = io::format_double(model->theta);
    meta["method"] = model->method;
  }
  if (solver) {
    meta["solver"] = solver->solver;
    meta["max_iter"] = std::to_string(solver->max_iter);
    meta["tol"] = io::format_double(solver->tol);
  }
  const auto now = std::chrono::system_clock::now();
  meta["started_unix_seconds"] = std::to_string(
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
  return meta;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

// ---------------------------------------------------------------------------

int cmd_load(const InputOptions& in, const ModelOptions& model, const std::string& out_dir) {
  const auto instance = load_input(in);
  const auto spec = to_spec(model);
  const auto commodities = plan_commodities(instance.network, instance.demand, spec);
  const auto method = parse_loading_method(model.method);
  const auto state =
      assign_all(instance.network, instance.network.free_flow_cost, commodities, method);

  const auto meta = base_metadata(in, &model, nullptr);
  io::write_commodity_flows_csv(out_path(out_dir, "flows.csv"), instance.network, commodities,
                                state, meta);
  io::write_aggregate_flows_csv(out_path(out_dir, "aggregate_flows.csv"), instance.network,
                                state.aggregate, meta);

  double worst = 0.0;
  bool unit_demand = !commodities.empty();
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    worst = std::max(worst, conservation_residual(instance.network, state.per_commodity[c],
                                                  commodities[c]));
    if (std::abs(commodities[c].total_demand() - 1.0) > 1e-12) unit_demand = false;
  }
  std::printf("loaded %zu commodities, conservation residual %.3e\n", commodities.size(),
              worst);
  if (unit_demand) {
    // Flow-rate table: with unit OD flows the link flows are choice rates.
    std::printf("%-10s", "link");
    for (std::size_t c = 0; c < commodities.size(); ++c) {
      std::printf(" dest=%-4d", instance.network.external_id(commodities[c].destination));
    }
    std::printf("\n");
    for (LinkId l = 0; l < instance.network.link_count(); ++l) {
      const Link& e = instance.network.graph.link(l);
      std::printf("%3d-%-6d", instance.network.external_id(e.tail),
                  instance.network.external_id(e.head));
      for (std::size_t c = 0; c < commodities.size(); ++c) {
        std::printf(" %8.3f", state.per_commodity[c][static_cast<std::size_t>(l)]);
      }
      std::printf("\n");
    }
  }
  return 0;
}

int cmd_equilibrium(const InputOptions& in, const ModelOptions& model, const SolverOptions& s,
                    const std::string& out_dir) {
  if (model.method != "mta") {
    fail(ErrorCategory::config,
         "equilibrium solvers require the mta loading method (strict-descent link sets change "
         "with the costs and break convergence)");
  }
  const auto instance = load_input(in);
  AssignmentProblem problem = make_problem(instance.network, instance.demand, to_spec(model));
  auto meta = base_metadata(in, &model, &s);

  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  if (s.solver == "msa" || s.solver == "pl") {
    PrimalOptions options;
    options.max_iter = s.max_iter;
    options.objective_tol = s.tol;
    options.line_search_tol = s.line_search_tol;
    const auto result =
        s.solver == "msa" ? solve_msa(problem, options) : solve_pl(problem, options);
    io::write_primal_trace_csv(out_path(out_dir, "trace.csv"), result.trace, meta);
    io::write_commodity_flows_csv(out_path(out_dir, "flows.csv"), instance.network,
                                  problem.commodities, result.flows, meta);
    io::write_aggregate_flows_csv(out_path(out_dir, "aggregate_flows.csv"), instance.network,
                                  result.flows.aggregate, meta);
    io::write_costs_csv(out_path(out_dir, "costs.csv"), instance.network, result.costs, meta);
    converged = result.converged;
    iterations = result.iterations;
    objective = result.objective;
  } else {
    DualOptions options;
    options.max_iter = s.max_iter;
    options.objective_tol = s.tol;
    options.step_size = s.step_size;
    options.initial_step = s.initial_step;
    options.k_min = s.k_min;
    options.backtrack_xi = s.xi;
    options.backtracking = !s.no_backtracking;
    const auto result =
        s.solver == "gp" ? solve_gp(problem, options) : solve_agp(problem, options);
    io::write_dual_trace_csv(out_path(out_dir, "trace.csv"), result.trace, meta);
    io::write_costs_csv(out_path(out_dir, "costs.csv"), instance.network, result.costs, meta);
    // Flows implied by the final costs.
    const auto flows = assign_all(instance.network, result.costs, problem.commodities,
                                  LoadingMethod::mta);
    io::write_commodity_flows_csv(out_path(out_dir, "flows.csv"), instance.network,
                                  problem.commodities, flows, meta);
    io::write_aggregate_flows_csv(out_path(out_dir, "aggregate_flows.csv"), instance.network,
                                  flows.aggregate, meta);
    converged = result.converged;
    iterations = result.iterations;
    objective = result.dual_objective;
  }
  std::printf("solver=%s converged=%d iterations=%d objective=%.12g\n", s.solver.c_str(),
              converged ? 1 : 0, iterations, objective);
  return 0;
}

int cmd_compare(const InputOptions& in, const ModelOptions& model, const SolverOptions& s,
                const std::string& out_dir) {
  const auto instance = load_input(in);
  AssignmentProblem problem = make_problem(instance.network, instance.demand, to_spec(model));

  std::vector<io::LabeledTraceRow> rows;
  auto push_primal = [&](const char* name, const PrimalResult& r) {
    for (const auto& row : r.trace) {
      rows.push_back({name, row.iter, row.elapsed_seconds, row.objective});
    }
    std::printf("%-4s iterations=%-5d objective=%.12g elapsed=%.3fs\n", name, r.iterations,
                r.objective, r.trace.empty() ? 0.0 : r.trace.back().elapsed_seconds);
  };
  auto push_dual = [&](const char* name, const DualResult& r) {
    for (const auto& row : r.trace) {
      rows.push_back({name, row.iter, row.elapsed_seconds, row.dual_objective});
    }
    std::printf("%-4s iterations=%-5d objective=%.12g elapsed=%.3fs\n", name, r.iterations,
                r.dual_objective, r.trace.empty() ? 0.0 : r.trace.back().elapsed_seconds);
  };

  PrimalOptions primal_options;
  primal_options.max_iter = s.max_iter;
  primal_options.objective_tol = s.tol;
  primal_options.line_search_tol = s.line_search_tol;
  push_primal("msa", solve_msa(problem, primal_options));
  push_primal("pl", solve_pl(problem, primal_options));

  DualOptions dual_options;
  dual_options.max_iter = s.max_iter;
  dual_options.objective_tol = s.tol;
  dual_options.step_size = s.step_size;
  dual_options.initial_step = s.initial_step;
  dual_options.k_min = s.k_min;
  dual_options.backtrack_xi = s.xi;
  dual_options.backtracking = !s.no_backtracking;
  push_dual("gp", solve_gp(problem, dual_options));
  push_dual("agp", solve_agp(problem, dual_options));

  io::write_compare_csv(out_path(out_dir, "compare.csv"), rows,
                        base_metadata(in, &model, &s));
  return 0;
}

int cmd_bench_loading(const std::vector<int>& grid_ks, int probit_draws, int repeats,
                      double grid_ref_flow, std::uint64_t seed, const std::string& out_dir) {
  using Clock = std::chrono::steady_clock;
  std::ostringstream csv;
  csv << "k,links,destinations,od_pairs,loader,seconds_total,seconds_per_destination\n";
  for (int k : grid_ks) {
    const auto grid = generate_grid(k, grid_ref_flow, 0.1);
    const auto& net = grid.network;
    const double destinations = static_cast<double>(grid.od_nodes.size());

    auto time_loader = [&](const std::string& name, auto&& body) {
      double best = kInfinity;
      for (int rep = 0; rep < repeats; ++rep) {
        const auto start = Clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
      }
      csv << k << "," << net.link_count() << "," << grid.demand.od_entry_count() << ","
          << destinations << "," << name << "," << io::format_double(best) << ","
          << io::format_double(best / destinations) << "\n";
      std::printf("k=%d %-12s %.4fs (%.6fs per destination)\n", k, name.c_str(), best,
                  best / destinations);
    };

    for (const char* model : {"logit", "model3"}) {
      const auto commodities =
          plan_commodities(net, grid.demand, to_spec({model, 1.0, "mta"}));
      for (LoadingMethod method : {LoadingMethod::dial, LoadingMethod::mta}) {
        const std::string name =
            std::string(model == std::string("logit") ? "logit" : "ngev") + "-" +
            to_string(method);
        time_loader(name, [&] {
          (void)assign_all(net, net.free_flow_cost, commodities, method);
        });
      }
    }
    if (probit_draws > 0) {
      time_loader("probit" + std::to_string(probit_draws), [&] {
        (void)probit_load(net, net.free_flow_cost, grid.demand,
                          {probit_draws, 0.3, seed, 1e-6});
      });
    }
  }
  io::write_text_file(out_path(out_dir, "loading_times.csv"), csv.str());
  return 0;
}

int cmd_probit_error(const InputOptions& in, const std::vector<int>& draws_list,
                     int reference_draws, double beta, std::uint64_t seed, int trace_draws,
                     const std::string& out_dir) {
  const auto instance = load_input(in);
  const auto curve =
      probit_error_curve(instance.network, instance.network.free_flow_cost, instance.demand,
                         draws_list, reference_draws, beta, seed);
  std::ostringstream csv;
  csv << "# beta = " << io::format_double(beta) << "\n";
  csv << "# seed = " << seed << "\n";
  csv << "# reference_draws = " << reference_draws << "\n";
  csv << "draws,max_relative_error\n";
  for (std::size_t i = 0; i < curve.draws.size(); ++i) {
    csv << curve.draws[i] << "," << io::format_double(curve.max_relative_error[i]) << "\n";
    std::printf("R=%-6d max relative error %.4f\n", curve.draws[i],
                curve.max_relative_error[i]);
  }
  io::write_text_file(out_path(out_dir, "probit_error.csv"), csv.str());

  if (trace_draws > 0) {
    std::ostringstream trace;
    trace << "draw,tail_id,head_id,flow\n";
    (void)probit_load(instance.network, instance.network.free_flow_cost, instance.demand,
                      {trace_draws, beta, seed, 1e-6},
                      [&](int draw, std::span<const double> flows) {
                        for (LinkId l = 0; l < instance.network.link_count(); ++l) {
                          const Link& e = instance.network.graph.link(l);
                          trace << draw << "," << instance.network.external_id(e.tail) << ","
                                << instance.network.external_id(e.head) << ","
                                << io::format_double(flows[static_cast<std::size_t>(l)])
                                << "\n";
                        }
                      });
    io::write_text_file(out_path(out_dir, "probit_trace.csv"), trace.str());
  }
  return 0;
}

int cmd_grid_gen(const InputOptions& in, const std::string& out_dir) {
  if (in.grid_k < 1) fail(ErrorCategory::config, "grid-gen needs --grid-k >= 1");
  auto grid = generate_grid(in.grid_k, in.grid_ref_flow, in.grid_decay,
                            {in.grid_cost, in.grid_capacity});
  if (in.demand_scale != 1.0) grid.demand = grid.demand.scaled(in.demand_scale);
  io::write_text_file(out_path(out_dir, "grid_net.tntp"), serialize_tntp_net(grid.network));
  io::write_text_file(out_path(out_dir, "grid_trips.tntp"),
                      serialize_tntp_trips(grid.network, grid.demand));
  io::write_network_csv(out_path(out_dir, "network.csv"), grid.network,
                        base_metadata(in, nullptr, nullptr));
  std::printf("grid k=%d: %d nodes, %d links, %zu od nodes, %zu od pairs, total flow %.6g\n",
              in.grid_k, grid.network.node_count(), grid.network.link_count(),
              grid.od_nodes.size(), grid.demand.od_entry_count(), grid.demand.total_flow());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markovian traffic equilibrium assignment with network-GEV route choice"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file");
  app.allow_config_extras(false);

  InputOptions in;
  ModelOptions model;
  SolverOptions solver;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<int> grid_ks = {1, 2};
  std::vector<int> draws_list = {10, 100, 1000};
  int probit_draws = 100;
  int reference_draws = 10000;
  int repeats = 3;
  int trace_draws = 0;
  double beta = 0.3;

  auto add_common = [&](CLI::App* cmd, bool with_model) {
    add_input_options(cmd, in);
    if (with_model) add_model_options(cmd, model);
    cmd->add_option("--output-dir", out_dir, "directory for CSV outputs");
    cmd->add_option("--seed", seed, "random seed");
  };

  auto* load = app.add_subcommand("load", "one flow-independent network loading");
  add_common(load, true);

  auto* equilibrium = app.add_subcommand("equilibrium", "solve the equilibrium assignment");
  add_common(equilibrium, true);
  add_solver_options(equilibrium, solver, true);

  auto* compare = app.add_subcommand("compare", "run msa, pl, gp and agp on one instance");
  add_common(compare, true);
  add_solver_options(compare, solver, false);

  auto* bench = app.add_subcommand("bench-loading", "time the loading algorithms on grids");
  bench->add_option("--grid-ks", grid_ks, "grid sizes to time");
  bench->add_option("--probit-draws", probit_draws, "probit draws to time (0 disables)");
  bench->add_option("--repeats", repeats, "timing repetitions (best is kept)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--grid-ref-flow", in.grid_ref_flow, "grid gravity reference flow");
  bench->add_option("--output-dir", out_dir, "directory for CSV outputs");
  bench->add_option("--seed", seed, "random seed");

  auto* probit = app.add_subcommand("probit-error", "draw-count error curve of probit loading");
  add_common(probit, false);
  probit->add_option("--draws-list", draws_list, "draw counts to evaluate");
  probit->add_option("--reference-draws", reference_draws, "draws of the reference solution")
      ->check(CLI::PositiveNumber);
  probit->add_option("--beta", beta, "per-link cost variance scale")->check(CLI::PositiveNumber);
  probit->add_option("--trace-draws", trace_draws, "also write per-draw flows for this many draws");

  auto* gridgen = app.add_subcommand("grid-gen", "emit a synthetic grid instance");
  add_common(gridgen, false);

  try {
    app.parse(argc, argv);
    if (load->parsed()) return cmd_load(in, model, out_dir);
    if (equilibrium->parsed()) return cmd_equilibrium(in, model, solver, out_dir);
    if (compare->parsed()) return cmd_compare(in, model, solver, out_dir);
    if (bench->parsed()) {
      return cmd_bench_loading(grid_ks, probit_draws, repeats, in.grid_ref_flow, seed, out_dir);
    }
    if (probit->parsed()) {
      return cmd_probit_error(in, draws_list, reference_draws, beta, seed, trace_draws, out_dir);
    }
    if (gridgen->parsed()) return cmd_grid_gen(in, out_dir);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: category=config " << e.what() << "\n";
    return static_cast<int>(ErrorCategory::config);
  } catch (const Error& e) {
    std::cerr << "error: category=" << to_string(e.category()) << " " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: category=internal " << e.what() << "\n";
    return 1;
  }
}
