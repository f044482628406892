#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support/markov_oracle.hpp"
#include "support/scenarios.hpp"
#include "wanet/epidemic.hpp"

using wanet::NeighborLists;
using wanet::NodeId;
using wanet::NodeState;
using wanet::Position;
using wanet::ReceptionMode;

namespace {

struct Fixture {
  std::vector<Position> positions;
  wanet::Domain domain{1000, 1000, false};
  wanet::RadioParams radio = support::radio_with_range(100.0);
  NeighborLists comm, interference;

  void build() {
    comm = wanet::neighbors_brute_force(positions, domain, wanet::transmission_range(radio));
    interference =
        wanet::neighbors_brute_force(positions, domain, wanet::interference_range(radio));
  }
  wanet::NetworkView view() const { return {comm, interference, positions, domain, radio}; }
};

void check_series(const wanet::TimeSeries& series, std::size_t n) {
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& c = series[t];
    ASSERT_EQ(c.s + c.i + c.r, n) << "step " << t;
    if (t > 0) {
      ASSERT_LE(c.s, series[t - 1].s);
      ASSERT_GE(c.r, series[t - 1].r);
    }
  }
}

} // namespace

TEST(SeedInfection, SingleSeed) {
  std::vector<NodeState> states(10, NodeState::Susceptible);
  wanet::Rng rng(1);
  wanet::seed_infection(states, 1, rng);
  const auto c = wanet::count_states(states);
  EXPECT_EQ(c.i, 1u);
  EXPECT_EQ(c.s, 9u);
}

TEST(SeedInfection, AllAndTooMany) {
  std::vector<NodeState> states(10, NodeState::Susceptible);
  wanet::Rng rng(1);
  wanet::seed_infection(states, 10, rng);
  EXPECT_EQ(wanet::count_states(states).i, 10u);
  std::vector<NodeState> fresh(10, NodeState::Susceptible);
  EXPECT_THROW(wanet::seed_infection(fresh, 11, rng), wanet::Error);
}

TEST(SeedInfection, DeterministicAndUniform) {
  auto pick = [](std::uint64_t seed) {
    std::vector<NodeState> states(10, NodeState::Susceptible);
    wanet::Rng rng(seed);
    wanet::seed_infection(states, 1, rng);
    return std::find(states.begin(), states.end(), NodeState::Infected) - states.begin();
  };
  EXPECT_EQ(pick(77), pick(77));
  std::vector<int> hits(10, 0);
  for (std::uint64_t s = 0; s < 20000; ++s)
    ++hits[pick(s)];
  // Binomial(20000, 0.1): sd ~ 42
  for (int h : hits)
    EXPECT_NEAR(h, 2000, 200);
}

TEST(SelectTransmitters, Examples) {
  const std::vector<std::pair<NodeId, NodeId>> edge{{0, 1}};
  const NeighborLists linked(3, edge, 0);
  const NeighborLists apart(3, {}, 0);
  wanet::Rng rng(5);
  const std::vector<NodeId> both{0, 1};
  EXPECT_EQ(wanet::select_transmitters(both, apart, ReceptionMode::MacSinr, rng), both);
  for (int k = 0; k < 50; ++k)
    EXPECT_EQ(wanet::select_transmitters(both, linked, ReceptionMode::MacSinr, rng).size(), 1u);
  EXPECT_EQ(wanet::select_transmitters(both, linked, ReceptionMode::Ideal, rng), both);
  EXPECT_EQ(wanet::select_transmitters(both, linked, ReceptionMode::Sinr, rng), both);
}

TEST(SelectTransmitters, MaximalIndependentSet) {
  wanet::Rng rng(21);
  const wanet::Domain d{500, 500, true};
  for (int trial = 0; trial < 50; ++trial) {
    const auto pos = wanet::place_uniform(400, d, rng);
    const auto lists = wanet::neighbors_cell_list(pos, d, 60);
    std::vector<NodeId> infected;
    for (NodeId i = 0; i < 400; ++i)
      if (rng.bernoulli(0.4))
        infected.push_back(i);
    const auto tx = wanet::select_transmitters(infected, lists, ReceptionMode::MacSinr, rng);
    ASSERT_TRUE(std::is_sorted(tx.begin(), tx.end()));
    for (auto a : tx)
      for (auto b : tx)
        ASSERT_FALSE(lists.contains(a, b));
    // Every deferred node has a transmitting interference neighbor.
    for (auto i : infected) {
      if (std::binary_search(tx.begin(), tx.end(), i))
        continue;
      const auto row = lists[i];
      ASSERT_TRUE(std::any_of(row.begin(), row.end(), [&](NodeId k) {
        return std::binary_search(tx.begin(), tx.end(), k);
      }));
    }
  }
}

TEST(Step, CertainInfectionReachesAllNeighbors) {
  Fixture f;
  f.positions = {{500, 500}, {550, 500}, {500, 550}, {450, 500}, {900, 900}};
  f.build();
  std::vector<NodeState> states(5, NodeState::Susceptible);
  states[0] = NodeState::Infected;
  wanet::EpidemicParams p;
  p.lambda = 1.0;
  p.delta = 0.0;
  wanet::Rng rng(1);
  const auto out = wanet::step(states, f.view(), p, rng);
  EXPECT_EQ(out.new_infections, 3u);
  EXPECT_EQ(states[1], NodeState::Infected);
  EXPECT_EQ(states[2], NodeState::Infected);
  EXPECT_EQ(states[3], NodeState::Infected);
  EXPECT_EQ(states[4], NodeState::Susceptible);
}

TEST(Step, NewlyInfectedDoNotRecoverSameStep) {
  Fixture f;
  f.positions = {{500, 500}, {550, 500}};
  f.build();
  std::vector<NodeState> states{NodeState::Infected, NodeState::Susceptible};
  wanet::EpidemicParams p;
  p.lambda = 1.0;
  p.delta = 1.0;
  wanet::Rng rng(1);
  wanet::step(states, f.view(), p, rng);
  EXPECT_EQ(states[0], NodeState::Removed);
  EXPECT_EQ(states[1], NodeState::Infected);
}

TEST(Step, ZeroLambdaNeverInfects) {
  auto sc = support::desk_scale(1, ReceptionMode::Ideal, 300, 300);
  sc.epidemic.lambda = 0.0;
  sc.epidemic.initial_infected = 20;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    wanet::Rng rng(seed);
    const auto run = wanet::run_single(sc, rng);
    for (const auto& c : run.series)
      EXPECT_EQ(c.s, 280u);
  }
}

TEST(Step, SinrBlocksReceptionNearInterferer) {
  // Node 1 hears node 0 at 90 m, but transmitter 2 sits 10 m from node 1.
  Fixture f;
  f.positions = {{500, 500}, {590, 500}, {600, 500}};
  f.build();
  wanet::EpidemicParams p;
  p.lambda = 1.0;
  p.delta = 0.0;
  std::vector<NodeState> states{NodeState::Infected, NodeState::Susceptible,
                                NodeState::Infected};
  wanet::Rng rng(1);
  // Node 1 still gets infected by node 2, whose own signal dominates.
  p.reception_mode = ReceptionMode::Sinr;
  auto out = wanet::step(states, f.view(), p, rng);
  EXPECT_EQ(out.new_infections, 1u);

  // With node 2 out of range of node 1's comm list but inside interference
  // range, the copy from node 0 is lost.
  f.positions = {{500, 500}, {580, 500}, {700, 500}};
  f.build();
  ASSERT_TRUE(f.comm.contains(0, 1));
  ASSERT_FALSE(f.comm.contains(1, 2));
  ASSERT_TRUE(f.interference.contains(1, 2));
  const double signal = wanet::received_power(f.radio, 80.0);
  const double noise = f.radio.noise + wanet::received_power(f.radio, 120.0);
  ASSERT_LT(signal / noise, f.radio.sensitivity_threshold);
  states = {NodeState::Infected, NodeState::Susceptible, NodeState::Infected};
  out = wanet::step(states, f.view(), p, rng);
  EXPECT_EQ(out.new_infections, 0u);
  p.reception_mode = ReceptionMode::Ideal;
  states = {NodeState::Infected, NodeState::Susceptible, NodeState::Infected};
  out = wanet::step(states, f.view(), p, rng);
  EXPECT_EQ(out.new_infections, 1u);
}

TEST(RunSingle, ImmediateRecovery) {
  auto sc = support::desk_scale(1, ReceptionMode::Ideal, 10, 100);
  sc.epidemic.lambda = 0.0;
  sc.epidemic.delta = 1.0;
  sc.epidemic.initial_infected = 3;
  wanet::Rng rng(4);
  const auto run = wanet::run_single(sc, rng);
  ASSERT_EQ(run.series.size(), 2u);
  EXPECT_EQ(run.series[0], (wanet::SirCounts{7, 3, 0}));
  EXPECT_EQ(run.series[1], (wanet::SirCounts{7, 0, 3}));
  EXPECT_FALSE(run.truncated);
}

TEST(RunSingle, TruncationIsFlagged) {
  auto sc = support::desk_scale(1, ReceptionMode::Ideal, 200, 300);
  sc.epidemic.delta = 0.0;
  sc.epidemic.max_steps = 5;
  wanet::Rng rng(4);
  const auto run = wanet::run_single(sc, rng);
  EXPECT_TRUE(run.truncated);
  EXPECT_EQ(run.series.size(), 6u);
}

TEST(RunSingle, StaticSeriesIgnoresUpdatePeriod) {
  auto sc = support::desk_scale(1, ReceptionMode::Ideal, 400, 300);
  sc.mobility.variant = wanet::Static{};
  wanet::TimeSeries reference;
  for (int period : {1, 2, 7, 20}) {
    sc.mobility.i_update = period;
    wanet::Rng rng(31);
    const auto run = wanet::run_single(sc, rng);
    EXPECT_EQ(run.rebuilds, 1u);
    if (reference.empty())
      reference = run.series;
    else
      EXPECT_EQ(run.series, reference);
  }
}

TEST(RunSingle, RebuildsEveryUpdatePeriod) {
  auto sc = support::desk_scale(3, ReceptionMode::Ideal, 300, 300);
  sc.epidemic.delta = 0.0;
  sc.epidemic.max_steps = 30;
  wanet::Rng rng(2);
  const auto run = wanet::run_single(sc, rng);
  ASSERT_TRUE(run.truncated);
  // Initial build plus one after steps 3, 6, ..., 27.
  EXPECT_EQ(run.rebuilds, 10u);
}

TEST(RunSingle, Deterministic) {
  for (auto mode : {ReceptionMode::Ideal, ReceptionMode::Sinr, ReceptionMode::MacSinr}) {
    const auto sc = support::desk_scale(2, mode, 300, 300);
    wanet::Rng a(5), b(5);
    EXPECT_EQ(wanet::run_single(sc, a).series, wanet::run_single(sc, b).series);
  }
}

TEST(RunSingle, ConservationAndMonotonicityAllModes) {
  for (auto mode : {ReceptionMode::Ideal, ReceptionMode::Sinr, ReceptionMode::MacSinr}) {
    for (int period : {1, 5}) {
      const auto sc = support::desk_scale(period, mode, 300, 300);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        wanet::Rng rng(seed);
        check_series(wanet::run_single(sc, rng).series, sc.n_nodes);
      }
    }
  }
}

TEST(RunSingle, RandomWaypointScenario) {
  auto sc = support::desk_scale(2, ReceptionMode::MacSinr, 300, 300);
  sc.domain.periodic = false;
  sc.mobility.variant = wanet::RandomWaypoint{2.0, 8.0, 1};
  wanet::Rng rng(3);
  check_series(wanet::run_single(sc, rng).series, sc.n_nodes);
}

TEST(RunSingle, MacTransmittersFormIndependentSets) {
  const auto sc = support::desk_scale(1, ReceptionMode::MacSinr, 400, 300);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    wanet::Rng rng(seed);
    wanet::run_single(sc, rng, [&](const wanet::StepTrace& trace) {
      for (auto a : trace.transmitters)
        for (auto b : trace.transmitters) {
          ASSERT_FALSE(trace.network.interference.contains(a, b));
          if (a != b) {
            ASSERT_GT(wanet::distance(trace.network.positions[a], trace.network.positions[b],
                                      sc.domain),
                      wanet::interference_range(sc.radio));
          }
        }
      ++checked;
    });
  }
  EXPECT_GT(checked, 0u);
}

// Interference can only remove receptions, so ideal reception infects at
// least as many nodes on average.
TEST(RunSingle, IdealInfectsAtLeastAsManyAsSinr) {
  const int runs = 200;
  auto sc = support::desk_scale(2, ReceptionMode::Ideal, 300, 300);
  auto totals = [&](ReceptionMode mode) {
    sc.epidemic.reception_mode = mode;
    std::vector<double> out;
    for (int k = 0; k < runs; ++k) {
      wanet::Rng rng(wanet::derive_seed(42, k));
      out.push_back(sc.n_nodes - wanet::run_single(sc, rng).series.back().s);
    }
    return out;
  };
  auto mean_sd = [](const std::vector<double>& v) {
    double m = 0, q = 0;
    for (double x : v)
      m += x;
    m /= v.size();
    for (double x : v)
      q += (x - m) * (x - m);
    return std::pair{m, std::sqrt(q / (v.size() - 1))};
  };
  const auto [mi, si] = mean_sd(totals(ReceptionMode::Ideal));
  const auto [ms, ss] = mean_sd(totals(ReceptionMode::Sinr));
  const double se = std::sqrt((si * si + ss * ss) / runs);
  EXPECT_GE(mi, ms - 2 * se) << "ideal " << mi << " sinr " << ms;
}

TEST(MarkovOracle, MatchesExactRationals) {
  const auto p = oracle::complete_graph_final_size(3, 0.5, 0.5, 1);
  EXPECT_NEAR(p[0], 0.0, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 7.0, 1e-12);
  EXPECT_NEAR(p[2], 8.0 / 63.0, 1e-12);
  EXPECT_NEAR(p[3], 46.0 / 63.0, 1e-12);
}

TEST(RunSingle, CompleteGraphMatchesMarkovChain) {
  const auto sc = support::complete_graph(3, 0.5, 0.5);
  const auto exact = oracle::complete_graph_final_size(3, 0.5, 0.5, 1);
  const int runs = 100000;
  std::vector<int> counts(4, 0);
  for (int k = 0; k < runs; ++k) {
    wanet::Rng rng(wanet::derive_seed(8, k));
    ++counts[wanet::run_single(sc, rng).series.back().r];
  }
  for (int r = 0; r <= 3; ++r) {
    const double sigma = std::sqrt(runs * exact[r] * (1 - exact[r]));
    EXPECT_LE(std::fabs(counts[r] - runs * exact[r]), 3 * sigma + 1e-9) << "R=" << r;
  }
}

TEST(EpidemicParams, Validation) {
  wanet::EpidemicParams p;
  EXPECT_NO_THROW(p.validate(10));
  p.lambda = 1.5;
  EXPECT_THROW(p.validate(10), wanet::Error);
  p = {};
  p.delta = -0.1;
  EXPECT_THROW(p.validate(10), wanet::Error);
  p = {};
  p.initial_infected = 11;
  EXPECT_THROW(p.validate(10), wanet::Error);
  p = {};
  p.max_steps = 0;
  EXPECT_THROW(p.validate(10), wanet::Error);
}
