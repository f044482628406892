#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "wanet/config.hpp"
#include "wanet/ensemble.hpp"
#include "wanet/epidemic.hpp"
#include "wanet/topology.hpp"

// CSV writers and the batch commands behind the command-line tool.
//
// Fixed decimal formatting: coordinates with 6 decimals, means and
// deviations with 8, wall times with 6.

namespace wanet {

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

class CsvFile {
public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_)
      throw Error("cannot open " + path.string() + " for writing");
  }

  std::ostream& stream() { return out_; }

  void close() {
    out_.flush();
    out_.close();
    if (out_.fail())
      throw Error("failed writing " + path_.string());
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

inline std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

} // namespace detail

inline const char* method_name(NeighborMethod m) {
  return m == NeighborMethod::BruteForce ? "brute_force" : "cell_list";
}

inline void write_series(std::ostream& os, const RunResult& run) {
  os << "step,S,I,R\n";
  for (std::size_t t = 0; t < run.series.size(); ++t) {
    const auto& c = run.series[t];
    os << t << ',' << c.s << ',' << c.i << ',' << c.r << '\n';
  }
  os << "# truncated=" << (run.truncated ? "true" : "false") << '\n';
}

inline void write_curves(std::ostream& os, const EnsembleStats& st) {
  os << "step,mean_S,mean_I,mean_R,std_I\n";
  for (std::size_t t = 0; t < st.mean_s.size(); ++t)
    os << t << ',' << detail::fixed(st.mean_s[t], 8) << ','
       << detail::fixed(st.mean_i[t], 8) << ',' << detail::fixed(st.mean_r[t], 8) << ','
       << detail::fixed(st.std_i[t], 8) << '\n';
}

inline void write_summary(std::ostream& os, const EnsembleStats& st) {
  os << "runs,peak_mean,peak_time_mean,attack_size_mean,truncated_runs\n";
  os << st.runs << ',' << detail::fixed(st.peak_mean, 8) << ','
     << detail::fixed(st.peak_time_mean, 8) << ',' << detail::fixed(st.attack_size_mean, 8)
     << ',' << st.truncated_runs << '\n';
}

inline void write_bench(std::ostream& os, std::span<const BenchRecord> records) {
  os << "n,method,i_update,pair_evals,wall_seconds\n";
  for (const auto& r : records)
    os << r.n_nodes << ',' << method_name(r.method) << ',' << r.update_period << ','
       << r.pair_evals << ',' << detail::fixed(r.wall_seconds, 6) << '\n';
}

inline void write_positions(std::ostream& os, std::span<const Position> positions) {
  os << "id,x,y\n";
  for (std::size_t i = 0; i < positions.size(); ++i)
    os << i << ',' << detail::fixed(positions[i].x, 6) << ','
       << detail::fixed(positions[i].y, 6) << '\n';
}

inline void write_edges(std::ostream& os, std::span<const Edge> edges) {
  os << "i,j\n";
  for (const auto& [i, j] : edges)
    os << i << ',' << j << '\n';
}

/// Single realization -> `series.csv`. Uses the same stream as ensemble
/// run 0, so a one-run ensemble reproduces it.
inline RunResult cmd_run(const SimConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.scenario.validate();
  Rng rng(derive_seed(cfg.seed, 0));
  const RunResult run = run_single(cfg.scenario, rng);
  detail::CsvFile file(detail::prepare_dir(out_dir) / "series.csv");
  write_series(file.stream(), run);
  file.close();
  return run;
}

/// Monte Carlo ensemble -> `curves.csv` and `summary.csv`.
inline EnsembleStats cmd_ensemble(const SimConfig& cfg, const std::filesystem::path& out_dir) {
  const auto stats = run_ensemble(cfg.scenario, cfg.runs, cfg.seed, cfg.workers);
  const auto dir = detail::prepare_dir(out_dir);
  detail::CsvFile curves(dir / "curves.csv");
  write_curves(curves.stream(), stats);
  curves.close();
  detail::CsvFile summary(dir / "summary.csv");
  write_summary(summary.stream(), stats);
  summary.close();
  return stats;
}

/// Topology-maintenance benchmark -> `bench.csv`.
inline std::vector<BenchRecord> cmd_bench(const SimConfig& cfg,
                                          std::span<const std::size_t> node_counts,
                                          std::span<const int> update_periods, int steps,
                                          const std::filesystem::path& out_dir) {
  const auto records = run_bench(node_counts, update_periods, cfg.scenario, cfg.seed, steps);
  detail::CsvFile file(detail::prepare_dir(out_dir) / "bench.csv");
  write_bench(file.stream(), records);
  file.close();
  return records;
}

struct GraphSnapshot {
  std::vector<Position> positions;
  std::vector<Edge> comm_edges;
  std::vector<Edge> interference_edges;
};

/// One static placement -> `positions.csv`, `comm_edges.csv`,
/// `interference_edges.csv`. Placement matches the start of ensemble run 0.
inline GraphSnapshot cmd_graph(const SimConfig& cfg, const std::filesystem::path& out_dir) {
  const auto& sc = cfg.scenario;
  sc.domain.validate();
  sc.radio.check();
  Rng rng(derive_seed(cfg.seed, 0));
  GraphSnapshot snap;
  snap.positions = place_uniform(sc.n_nodes, sc.domain, rng);
  snap.comm_edges = export_graph(
      build_neighbor_lists(snap.positions, sc.domain, transmission_range(sc.radio)));
  snap.interference_edges = export_graph(
      build_neighbor_lists(snap.positions, sc.domain, interference_range(sc.radio)));

  const auto dir = detail::prepare_dir(out_dir);
  detail::CsvFile pos(dir / "positions.csv");
  write_positions(pos.stream(), snap.positions);
  pos.close();
  detail::CsvFile comm(dir / "comm_edges.csv");
  write_edges(comm.stream(), snap.comm_edges);
  comm.close();
  detail::CsvFile interf(dir / "interference_edges.csv");
  write_edges(interf.stream(), snap.interference_edges);
  interf.close();
  return snap;
}

} // namespace wanet
