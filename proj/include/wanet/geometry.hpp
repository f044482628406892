#pragma once

#include <cmath>
#include <string>

#include "wanet/diagnostics.hpp"

namespace wanet {

/// A point in the plane, meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Rectangular simulation area [0, lx) x [0, ly), optionally a torus.
struct Domain {
  double lx = 1000.0;
  double ly = 1000.0;
  bool periodic = true;

  void validate() const {
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
      throw Error("domain edges must be positive and finite");
  }

  bool contains(const Position& p) const {
    return p.x >= 0.0 && p.x < lx && p.y >= 0.0 && p.y < ly;
  }

  double area() const { return lx * ly; }
};

namespace detail {

// Minimum-image separation along one axis.
inline double min_image(double delta, double length) {
  delta = std::fabs(delta);
  return delta > 0.5 * length ? length - delta : delta;
}

inline double wrap(double v, double length) {
  double w = std::fmod(v, length);
  if (w < 0.0)
    w += length;
  // fmod of a tiny negative value plus length can round up to length
  return w >= length ? 0.0 : w;
}

inline double reflect(double v, double length) {
  const double period = 2.0 * length;
  double w = std::fmod(v, period);
  if (w < 0.0)
    w += period;
  if (w >= length)
    w = period - w;
  return w >= length ? std::nextafter(length, 0.0) : w;
}

} // namespace detail

/// Squared Euclidean or minimum-image distance.
inline double distance_sq(const Position& a, const Position& b, const Domain& d) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  if (d.periodic) {
    dx = detail::min_image(dx, d.lx);
    dy = detail::min_image(dy, d.ly);
  }
  return dx * dx + dy * dy;
}

/// Euclidean distance, or minimum-image distance on a periodic domain.
inline double distance(const Position& a, const Position& b, const Domain& d) {
  return std::sqrt(distance_sq(a, b, d));
}

/// Maps a position into the domain: wraps on a torus, reflects at the
/// walls otherwise. Idempotent on canonical positions.
inline Position canonicalize(const Position& p, const Domain& d) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error("cannot canonicalize non-finite position (" + std::to_string(p.x) +
                ", " + std::to_string(p.y) + ")");
  if (d.periodic)
    return {detail::wrap(p.x, d.lx), detail::wrap(p.y, d.ly)};
  return {detail::reflect(p.x, d.lx), detail::reflect(p.y, d.ly)};
}

} // namespace wanet
