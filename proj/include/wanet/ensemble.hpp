#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "wanet/epidemic.hpp"
#include "wanet/rng.hpp"
#include "wanet/topology.hpp"

namespace wanet {

/// Exact integer sums over a set of runs. Merging is commutative and
/// associative, so the totals do not depend on completion order.
///
/// Runs shorter than the longest one are padded with their absorbing
/// counts (S, 0, R), which keeps S + I + R = N per run at every step.
class EnsembleAccumulator {
public:
  void add(const RunResult& run) {
    const auto& series = run.series;
    const SirCounts last = series.back();
    extend_to(series.size());
    for (std::size_t t = 0; t < sum_s_.size(); ++t) {
      const SirCounts c = t < series.size() ? series[t] : SirCounts{last.s, 0, last.r};
      sum_s_[t] += c.s;
      sum_i_[t] += c.i;
      sum_r_[t] += c.r;
      sum_i2_[t] += std::uint64_t{c.i} * c.i;
    }
    tail_s_ += last.s;
    tail_r_ += last.r;

    std::uint64_t peak = 0;
    std::uint64_t peak_time = 0;
    for (std::size_t t = 0; t < series.size(); ++t) {
      if (series[t].i > peak) {
        peak = series[t].i;
        peak_time = t;
      }
    }
    ++runs_;
    peak_sum_ += peak;
    peak_sq_ += peak * peak;
    peak_time_sum_ += peak_time;
    peak_time_sq_ += peak_time * peak_time;
    attack_sum_ += last.r;
    if (run.truncated)
      ++truncated_;
  }

  void merge(const EnsembleAccumulator& other) {
    // Pad both sides to the common length before summing.
    const std::size_t len = std::max(sum_s_.size(), other.sum_s_.size());
    extend_to(len);
    for (std::size_t t = 0; t < len; ++t) {
      const bool has = t < other.sum_s_.size();
      sum_s_[t] += has ? other.sum_s_[t] : other.tail_s_;
      sum_i_[t] += has ? other.sum_i_[t] : 0;
      sum_r_[t] += has ? other.sum_r_[t] : other.tail_r_;
      sum_i2_[t] += has ? other.sum_i2_[t] : 0;
    }
    tail_s_ += other.tail_s_;
    tail_r_ += other.tail_r_;
    runs_ += other.runs_;
    peak_sum_ += other.peak_sum_;
    peak_sq_ += other.peak_sq_;
    peak_time_sum_ += other.peak_time_sum_;
    peak_time_sq_ += other.peak_time_sq_;
    attack_sum_ += other.attack_sum_;
    truncated_ += other.truncated_;
  }

  std::uint64_t runs() const { return runs_; }
  std::size_t steps() const { return sum_s_.size(); }
  std::span<const std::uint64_t> sum_s() const { return sum_s_; }
  std::span<const std::uint64_t> sum_i() const { return sum_i_; }
  std::span<const std::uint64_t> sum_r() const { return sum_r_; }
  std::span<const std::uint64_t> sum_i2() const { return sum_i2_; }
  std::uint64_t peak_sum() const { return peak_sum_; }
  std::uint64_t peak_sq() const { return peak_sq_; }
  std::uint64_t peak_time_sum() const { return peak_time_sum_; }
  std::uint64_t peak_time_sq() const { return peak_time_sq_; }
  std::uint64_t attack_sum() const { return attack_sum_; }
  std::uint64_t truncated() const { return truncated_; }

  friend bool operator==(const EnsembleAccumulator&, const EnsembleAccumulator&) = default;

private:
  // Grows the per-step arrays; the new tail entries hold the absorbed
  // counts of every run merged so far.
  void extend_to(std::size_t len) {
    if (len <= sum_s_.size())
      return;
    sum_s_.resize(len, tail_s_);
    sum_i_.resize(len, 0);
    sum_r_.resize(len, tail_r_);
    sum_i2_.resize(len, 0);
  }

  std::vector<std::uint64_t> sum_s_, sum_i_, sum_r_, sum_i2_;
  std::uint64_t tail_s_ = 0, tail_r_ = 0;
  std::uint64_t runs_ = 0;
  std::uint64_t peak_sum_ = 0, peak_sq_ = 0;
  std::uint64_t peak_time_sum_ = 0, peak_time_sq_ = 0;
  std::uint64_t attack_sum_ = 0;
  std::uint64_t truncated_ = 0;
};

/// Ensemble averages derived from an accumulator. Standard deviations are
/// population deviations over runs.
struct EnsembleStats {
  std::uint64_t runs = 0;
  std::vector<double> mean_s, mean_i, mean_r, std_i;
  double peak_mean = 0.0;
  double peak_std = 0.0;
  double peak_time_mean = 0.0;
  double peak_time_std = 0.0;
  double attack_size_mean = 0.0;
  std::uint64_t truncated_runs = 0;
  EnsembleAccumulator totals;

  /// Standard error of peak_mean and peak_time_mean.
  double peak_sem() const { return peak_std / std::sqrt(static_cast<double>(runs)); }
  double peak_time_sem() const {
    return peak_time_std / std::sqrt(static_cast<double>(runs));
  }
};

namespace detail {

inline double population_std(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(sum) / nn;
  const double var = static_cast<double>(sum_sq) / nn - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

} // namespace detail

inline EnsembleStats summarize(const EnsembleAccumulator& acc) {
  EnsembleStats st;
  st.runs = acc.runs();
  st.totals = acc;
  if (st.runs == 0)
    return st;
  const double n = static_cast<double>(st.runs);
  const std::size_t len = acc.steps();
  st.mean_s.resize(len);
  st.mean_i.resize(len);
  st.mean_r.resize(len);
  st.std_i.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    st.mean_s[t] = static_cast<double>(acc.sum_s()[t]) / n;
    st.mean_i[t] = static_cast<double>(acc.sum_i()[t]) / n;
    st.mean_r[t] = static_cast<double>(acc.sum_r()[t]) / n;
    st.std_i[t] = detail::population_std(acc.sum_i()[t], acc.sum_i2()[t], st.runs);
  }
  st.peak_mean = static_cast<double>(acc.peak_sum()) / n;
  st.peak_std = detail::population_std(acc.peak_sum(), acc.peak_sq(), st.runs);
  st.peak_time_mean = static_cast<double>(acc.peak_time_sum()) / n;
  st.peak_time_std = detail::population_std(acc.peak_time_sum(), acc.peak_time_sq(), st.runs);
  st.attack_size_mean = static_cast<double>(acc.attack_sum()) / n;
  st.truncated_runs = acc.truncated();
  return st;
}

/// Runs `n_runs` independent realizations on `workers` threads (task
/// farming). Run k draws from `Rng(derive_seed(master_seed, k))`, so the
/// statistics are identical for every worker count. `on_run`, if set, sees
/// each finished run under the accumulator lock.
template <typename OnRun = std::nullptr_t>
EnsembleStats run_ensemble(const Scenario& sc, std::uint64_t n_runs,
                           std::uint64_t master_seed, unsigned workers,
                           OnRun on_run = nullptr) {
  if (n_runs < 1)
    throw Error("ensemble.runs must be >= 1");
  if (workers < 1)
    throw Error("ensemble.workers must be >= 1");
  sc.validate();

  EnsembleAccumulator acc;
  std::mutex lock;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= n_runs)
        return;
      try {
        Rng rng(derive_seed(master_seed, k));
        RunResult run = run_single(sc, rng);
        std::lock_guard guard(lock);
        acc.add(run);
        if constexpr (!std::is_same_v<OnRun, std::nullptr_t>)
          on_run(k, run);
      } catch (...) {
        std::lock_guard guard(lock);
        if (!failure)
          failure = std::current_exception();
        next.store(n_runs);
        return;
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(workers, n_runs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);
  return summarize(acc);
}

struct BenchRecord {
  std::size_t n_nodes = 0;
  NeighborMethod method = NeighborMethod::CellList;
  int update_period = 1;
  std::uint64_t pair_evals = 0;
  std::uint64_t rebuilds = 0;
  double wall_seconds = 0.0;
};

/// Topology-maintenance cost for each (N, i_update, method).
///
/// The domain keeps the scenario's node density: both edges scale by
/// sqrt(N / sc.n_nodes). Nodes random-walk for `steps` epidemic steps and
/// the communication lists are rebuilt every `i_update` steps (starting at
/// step 0), i.e. steps / i_update times. Placement and walk are seeded from
/// (seed, N) only, so both methods and all update periods follow the same
/// trajectory.
inline std::vector<BenchRecord> run_bench(std::span<const std::size_t> node_counts,
                                          std::span<const int> update_periods,
                                          const Scenario& sc, std::uint64_t seed,
                                          int steps) {
  if (steps < 1)
    throw Error("bench steps must be >= 1");
  if (sc.n_nodes < 1)
    throw Error("n_nodes must be >= 1");
  const double density = static_cast<double>(sc.n_nodes) / sc.domain.area();
  const double range = transmission_range(sc.radio);
  const double step_length = [&] {
    if (const auto* walk = std::get_if<RandomWalk>(&sc.mobility.variant))
      return walk->step_length;
    return RandomWalk{}.step_length;
  }();

  std::vector<BenchRecord> out;
  for (std::size_t n : node_counts) {
    if (n < 1)
      throw Error("bench node counts must be >= 1");
    const double scale = std::sqrt(static_cast<double>(n) / density / sc.domain.area());
    const Domain domain{sc.domain.lx * scale, sc.domain.ly * scale, sc.domain.periodic};
    for (int period : update_periods) {
      if (period < 1)
        throw Error("bench update periods must be >= 1");
      for (auto method : {NeighborMethod::BruteForce, NeighborMethod::CellList}) {
        Rng rng(derive_seed(seed, n));
        auto positions = place_uniform(n, domain, rng);
        BenchRecord rec{n, method, period, 0, 0, 0.0};
        const auto start = std::chrono::steady_clock::now();
        for (int t = 0; t < steps; ++t) {
          if (t % period != 0)
            continue;
          if (t > 0)
            for (auto& p : positions)
              p = step_random_walk(p, step_length, domain, rng);
          const auto lists = build_neighbor_lists(positions, domain, range, method);
          rec.pair_evals += lists.pair_evals();
          ++rec.rebuilds;
        }
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(rec);
      }
    }
  }
  return out;
}

} // namespace wanet
