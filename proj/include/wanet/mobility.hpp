#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "wanet/diagnostics.hpp"
#include "wanet/geometry.hpp"
#include "wanet/rng.hpp"

namespace wanet {

struct Static {};

/// Fixed-length step in a uniformly random direction per update.
struct RandomWalk {
  double step_length = 10.0; // meters per update
};

/// Straight-line travel to uniform random targets at a uniform random
/// speed, with a pause after each arrival. Speeds are meters per update.
struct RandomWaypoint {
  double speed_min = 1.0;
  double speed_max = 10.0;
  int pause_steps = 0;
};

using MobilityVariant = std::variant<Static, RandomWalk, RandomWaypoint>;

struct MobilityModel {
  MobilityVariant variant = RandomWalk{};
  int i_update = 1; // epidemic steps between position updates

  bool is_static() const { return std::holds_alternative<Static>(variant); }

  void validate(const Domain& d) const {
    if (i_update < 1)
      throw Error("mobility.i_update must be >= 1");
    if (const auto* walk = std::get_if<RandomWalk>(&variant)) {
      if (!(walk->step_length > 0.0) || !std::isfinite(walk->step_length))
        throw Error("mobility.step_length must be positive");
    } else if (const auto* wp = std::get_if<RandomWaypoint>(&variant)) {
      if (!(wp->speed_min > 0.0) || !(wp->speed_min <= wp->speed_max) ||
          !std::isfinite(wp->speed_max))
        throw Error("mobility.speed_min and mobility.speed_max must satisfy "
                    "0 < speed_min <= speed_max");
      if (wp->pause_steps < 0)
        throw Error("mobility.pause_steps must be >= 0");
      if (d.periodic)
        throw Error("mobility.model = random_waypoint requires domain.periodic = false");
    }
  }
};

/// One random-walk step in direction `theta` (radians).
inline Position step_in_direction(const Position& p, double step_length, double theta,
                                  const Domain& d) {
  return canonicalize({p.x + step_length * std::cos(theta),
                       p.y + step_length * std::sin(theta)},
                      d);
}

inline Position step_random_walk(const Position& p, double step_length, const Domain& d,
                                 Rng& rng) {
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return step_in_direction(p, step_length, theta, d);
}

/// Per-node random-waypoint bookkeeping.
struct WaypointState {
  Position target;
  double speed = 0.0;
  int pause_left = 0;
  bool moving = false;
};

inline WaypointState start_waypoint(const RandomWaypoint& model, const Domain& d,
                                    Rng& rng) {
  WaypointState s;
  const double tx = rng.uniform() * d.lx;
  s.target = canonicalize({tx, rng.uniform() * d.ly}, d);
  s.speed = rng.uniform(model.speed_min, model.speed_max);
  s.moving = true;
  return s;
}

/// Advances one node by one update. A node that arrives stays put for
/// `pause_steps` further updates, then leaves for a fresh target.
inline void step_random_waypoint(Position& p, WaypointState& s,
                                 const RandomWaypoint& model, const Domain& d,
                                 Rng& rng) {
  if (!s.moving) {
    if (s.pause_left > 0) {
      --s.pause_left;
      return;
    }
    s = start_waypoint(model, d, rng);
  }
  const double dx = s.target.x - p.x;
  const double dy = s.target.y - p.y;
  const double remaining = std::hypot(dx, dy);
  if (remaining <= s.speed) {
    p = s.target;
    s.moving = false;
    s.pause_left = model.pause_steps;
    return;
  }
  const double f = s.speed / remaining;
  p = canonicalize({p.x + f * dx, p.y + f * dy}, d);
}

/// Mutable per-run mobility state: the model plus any per-node memory.
class Mobility {
public:
  Mobility(MobilityModel model, const Domain& domain, std::size_t n_nodes, Rng& rng)
      : model_(std::move(model)), domain_(domain) {
    model_.validate(domain_);
    if (const auto* wp = std::get_if<RandomWaypoint>(&model_.variant)) {
      waypoints_.reserve(n_nodes);
      for (std::size_t i = 0; i < n_nodes; ++i)
        waypoints_.push_back(start_waypoint(*wp, domain_, rng));
    }
  }

  const MobilityModel& model() const { return model_; }
  std::span<const WaypointState> waypoints() const { return waypoints_; }

  /// Moves every node once, consuming random draws in node-id order.
  void update_positions(std::span<Position> positions, Rng& rng) {
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, RandomWalk>) {
            for (auto& p : positions)
              p = step_random_walk(p, m.step_length, domain_, rng);
          } else if constexpr (std::is_same_v<M, RandomWaypoint>) {
            for (std::size_t i = 0; i < positions.size(); ++i)
              step_random_waypoint(positions[i], waypoints_[i], m, domain_, rng);
          }
        },
        model_.variant);
  }

private:
  MobilityModel model_;
  Domain domain_;
  std::vector<WaypointState> waypoints_;
};

/// Uniform random placement, two draws per node in id order.
inline std::vector<Position> place_uniform(std::size_t n, const Domain& d, Rng& rng) {
  std::vector<Position> out(n);
  for (auto& p : out) {
    const double x = rng.uniform() * d.lx;
    p = canonicalize({x, rng.uniform() * d.ly}, d);
  }
  return out;
}

} // namespace wanet
