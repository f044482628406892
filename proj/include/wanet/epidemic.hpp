#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "wanet/diagnostics.hpp"
#include "wanet/geometry.hpp"
#include "wanet/mobility.hpp"
#include "wanet/radio.hpp"
#include "wanet/rng.hpp"
#include "wanet/topology.hpp"

namespace wanet {

enum class NodeState : std::uint8_t { Susceptible, Infected, Removed };

/// How a worm copy reaches a communication neighbor.
///  - Ideal: every copy sent over a link is received.
///  - Sinr: all infected nodes transmit; reception needs SINR >= threshold
///    against every other simultaneous transmitter in interference range.
///  - MacSinr: as Sinr, but transmitters first contend for the medium and
///    form an independent set of the interference graph.
enum class ReceptionMode { Ideal, Sinr, MacSinr };

struct EpidemicParams {
  double lambda = 0.3; // infection probability per received copy
  double delta = 0.1;  // per-step patch probability
  ReceptionMode reception_mode = ReceptionMode::Ideal;
  int max_steps = 100000;
  int initial_infected = 1;

  void validate(std::size_t n_nodes) const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw Error("epidemic.lambda must lie in [0,1]");
    if (!(delta >= 0.0 && delta <= 1.0))
      throw Error("epidemic.delta must lie in [0,1]");
    if (max_steps < 1)
      throw Error("epidemic.max_steps must be >= 1");
    if (initial_infected < 1 || static_cast<std::size_t>(initial_infected) > n_nodes)
      throw Error("epidemic.initial_infected must lie in [1, n_nodes]");
  }
};

struct SirCounts {
  std::uint32_t s = 0;
  std::uint32_t i = 0;
  std::uint32_t r = 0;

  friend bool operator==(const SirCounts&, const SirCounts&) = default;
};

/// Counts per step; entry 0 is the state right after seeding.
using TimeSeries = std::vector<SirCounts>;

inline SirCounts count_states(std::span<const NodeState> states) {
  SirCounts c;
  for (auto s : states) {
    switch (s) {
    case NodeState::Susceptible: ++c.s; break;
    case NodeState::Infected: ++c.i; break;
    case NodeState::Removed: ++c.r; break;
    }
  }
  return c;
}

/// Infects `k` distinct nodes chosen uniformly (partial Fisher-Yates).
inline void seed_infection(std::span<NodeState> states, std::size_t k, Rng& rng) {
  const std::size_t n = states.size();
  if (k > n)
    throw Error("seed_infection: cannot infect " + std::to_string(k) + " of " +
                std::to_string(n) + " nodes");
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  for (std::size_t m = 0; m < k; ++m) {
    const auto pick = m + rng.below(n - m);
    std::swap(ids[m], ids[pick]);
    states[ids[m]] = NodeState::Infected;
  }
}

/// Infected nodes allowed on the air this step, ascending.
///
/// In MacSinr mode nodes try in a uniformly random order and defer when an
/// interference neighbor already holds the medium (listen-before-talk), which
/// yields a maximal independent set of the infected interference subgraph.
inline std::vector<NodeId> select_transmitters(std::span<const NodeId> infected,
                                               const NeighborLists& interference,
                                               ReceptionMode mode, Rng& rng) {
  std::vector<NodeId> out(infected.begin(), infected.end());
  if (mode != ReceptionMode::MacSinr)
    return out;

  for (std::size_t m = out.size(); m > 1; --m)
    std::swap(out[m - 1], out[rng.below(m)]);

  std::vector<char> on_air(interference.size(), 0);
  std::vector<NodeId> chosen;
  for (NodeId candidate : out) {
    const auto nbrs = interference[candidate];
    const bool busy =
        std::any_of(nbrs.begin(), nbrs.end(), [&](NodeId k) { return on_air[k] != 0; });
    if (!busy) {
      on_air[candidate] = 1;
      chosen.push_back(candidate);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Read-only view of the network a step runs on.
struct NetworkView {
  const NeighborLists& comm;
  const NeighborLists& interference;
  std::span<const Position> positions;
  const Domain& domain;
  const RadioParams& radio;
};

struct StepOutcome {
  std::vector<NodeId> transmitters;
  std::uint32_t new_infections = 0;
  std::uint32_t recoveries = 0;
};

/// One synchronous SIR step: infection from this step's transmitters, then
/// recovery of the nodes that were infected when the step began.
inline StepOutcome step(std::span<NodeState> states, const NetworkView& net,
                        const EpidemicParams& params, Rng& rng) {
  const std::size_t n = states.size();
  std::vector<NodeId> infected;
  for (std::size_t i = 0; i < n; ++i)
    if (states[i] == NodeState::Infected)
      infected.push_back(static_cast<NodeId>(i));

  StepOutcome out;
  out.transmitters =
      select_transmitters(infected, net.interference, params.reception_mode, rng);
  std::vector<char> on_air(n, 0);
  for (NodeId t : out.transmitters)
    on_air[t] = 1;

  std::vector<double> others;
  std::vector<std::pair<NodeId, double>> audible;
  for (std::size_t j = 0; j < n; ++j) {
    if (states[j] != NodeState::Susceptible)
      continue;
    const auto links = net.comm[j];
    if (std::none_of(links.begin(), links.end(), [&](NodeId i) { return on_air[i] != 0; }))
      continue;

    if (params.reception_mode != ReceptionMode::Ideal) {
      audible.clear();
      for (NodeId k : net.interference[j])
        if (on_air[k])
          audible.emplace_back(
              k, received_power(net.radio,
                                distance(net.positions[k], net.positions[j], net.domain)));
    }

    for (NodeId i : links) {
      if (!on_air[i])
        continue;
      if (params.reception_mode != ReceptionMode::Ideal) {
        double signal = 0.0;
        others.clear();
        for (const auto& [k, power] : audible) {
          if (k == i)
            signal = power;
          else
            others.push_back(power);
        }
        if (!sinr_ok_powers(net.radio, signal, others))
          continue;
      }
      if (rng.bernoulli(params.lambda)) {
        states[j] = NodeState::Infected;
        ++out.new_infections;
        break;
      }
    }
  }

  for (NodeId i : infected) {
    if (rng.bernoulli(params.delta)) {
      states[i] = NodeState::Removed;
      ++out.recoveries;
    }
  }
  return out;
}

/// Everything a single realization needs besides its random stream.
struct Scenario {
  std::size_t n_nodes = 1000;
  Domain domain;
  RadioParams radio;
  MobilityModel mobility;
  EpidemicParams epidemic;

  void validate() const {
    if (n_nodes < 1)
      throw Error("n_nodes must be >= 1");
    domain.validate();
    radio.validate();
    mobility.validate(domain);
    epidemic.validate(n_nodes);
  }

  bool needs_interference() const {
    return epidemic.reception_mode != ReceptionMode::Ideal;
  }
};

struct RunResult {
  TimeSeries series;
  bool truncated = false;
  std::uint64_t rebuilds = 0;
};

/// Hook for inspecting every step of a run (tests, tracing).
struct StepTrace {
  int step = 0;
  const NetworkView& network;
  std::span<const NodeId> transmitters;
  std::span<const NodeState> states;
};

using StepObserver = std::function<void(const StepTrace&)>;

/// One Monte Carlo realization: random placement, seeding, then steps until
/// the epidemic dies out or `max_steps` is hit. Positions move (and both
/// neighbor lists are rebuilt) after every `i_update` steps.
///
/// Random draws are consumed in a fixed order: placement, mobility setup,
/// seeding, then per step transmitter order, infection trials and recovery
/// trials, followed by any position update.
inline RunResult run_single(const Scenario& sc, Rng& rng, const StepObserver& observer = {}) {
  const double r_t = transmission_range(sc.radio);
  const double r_i = interference_range(sc.radio);

  auto positions = place_uniform(sc.n_nodes, sc.domain, rng);
  Mobility mobility(sc.mobility, sc.domain, sc.n_nodes, rng);

  RunResult result;
  NeighborLists comm;
  NeighborLists interference;
  auto rebuild = [&] {
    comm = build_neighbor_lists(positions, sc.domain, r_t);
    interference = sc.needs_interference()
                       ? build_neighbor_lists(positions, sc.domain, r_i)
                       : NeighborLists(sc.n_nodes, {}, 0);
    ++result.rebuilds;
  };
  rebuild();

  std::vector<NodeState> states(sc.n_nodes, NodeState::Susceptible);
  seed_infection(states, static_cast<std::size_t>(sc.epidemic.initial_infected), rng);
  result.series.push_back(count_states(states));

  const NetworkView net{comm, interference, positions, sc.domain, sc.radio};
  for (int t = 1;; ++t) {
    auto outcome = step(states, net, sc.epidemic, rng);
    const auto counts = count_states(states);
    result.series.push_back(counts);
    if (observer)
      observer(StepTrace{t, net, outcome.transmitters, states});
    if (counts.i == 0)
      break;
    if (t >= sc.epidemic.max_steps) {
      result.truncated = true;
      break;
    }
    if (!mobility.model().is_static() && t % sc.mobility.i_update == 0) {
      mobility.update_positions(positions, rng);
      rebuild();
    }
  }
  return result;
}

} // namespace wanet
