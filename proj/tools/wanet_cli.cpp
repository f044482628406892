// Command-line front end: run, ensemble, bench, graph.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wanet/wanet.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Configuration file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Override the master seed");
  cmd->add_option("--workers", opts.workers, "Override ensemble.workers");
  cmd->add_option("--set", opts.overrides, "Override any config key (key=value)");
}

wanet::SimConfig load(const CommonOptions& opts) {
  auto entries = wanet::read_entries(opts.config_path);
  wanet::apply_overrides(entries, opts.overrides);
  if (opts.seed)
    entries["seed"] = std::to_string(*opts.seed);
  if (opts.workers)
    entries["ensemble.workers"] = std::to_string(*opts.workers);
  auto cfg = wanet::parse_config(entries);
  for (const auto& w : cfg.warnings)
    std::cerr << "warning: " << w << '\n';
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile adhoc network worm-epidemic simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, ens_opts, bench_opts, graph_opts;
  auto* run = app.add_subcommand("run", "Single realization -> series.csv");
  add_common(run, run_opts);

  auto* ensemble =
      app.add_subcommand("ensemble", "Monte Carlo ensemble -> curves.csv, summary.csv");
  add_common(ensemble, ens_opts);

  auto* bench = app.add_subcommand("bench", "Neighbor-list rebuild cost -> bench.csv");
  add_common(bench, bench_opts);
  std::vector<std::size_t> node_counts{1000, 2000, 4000, 8000};
  std::vector<int> periods{1, 2, 5, 10, 20};
  int steps = 100;
  bench->add_option("--nodes", node_counts, "Node counts (density fixed by the config)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--periods", periods, "Update periods i_update")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--steps", steps, "Epidemic steps per record")->capture_default_str();

  auto* graph = app.add_subcommand(
      "graph", "Static snapshot -> positions.csv, comm_edges.csv, interference_edges.csv");
  add_common(graph, graph_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto result = wanet::cmd_run(load(run_opts), run_opts.out_dir);
      if (result.truncated)
        std::cerr << "warning: run hit epidemic.max_steps before dying out\n";
    } else if (ensemble->parsed()) {
      wanet::cmd_ensemble(load(ens_opts), ens_opts.out_dir);
    } else if (bench->parsed()) {
      wanet::cmd_bench(load(bench_opts), node_counts, periods, steps, bench_opts.out_dir);
    } else if (graph->parsed()) {
      wanet::cmd_graph(load(graph_opts), graph_opts.out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
