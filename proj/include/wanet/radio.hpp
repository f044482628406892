#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wanet/diagnostics.hpp"

namespace wanet {

/// Homogeneous radio parameters shared by every device.
///
/// Received power follows the power law P / (c * r^alpha). A link is
/// usable when the signal-to-noise(-plus-interference) ratio reaches
/// `sensitivity_threshold`.
struct RadioParams {
  double transmit_power = 1.0;        // watts
  double pathloss_constant = 1.0;     // dimensionless
  double pathloss_exponent = 3.0;     // typically within [2, 5]
  double noise = 1e-7;                // watts
  double sensitivity_threshold = 10.0;
  double interference_multiplier = 2.0;

  /// Throws on hard invariant violations.
  void check() const {
    auto require_positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw Error(std::string("radio.") + name + " must be positive and finite");
    };
    require_positive(transmit_power, "transmit_power");
    require_positive(pathloss_constant, "pathloss_constant");
    require_positive(noise, "noise");
    require_positive(sensitivity_threshold, "sensitivity_threshold");
    require_positive(pathloss_exponent, "pathloss_exponent");
    if (!(interference_multiplier >= 1.0) || !std::isfinite(interference_multiplier))
      throw Error("radio.interference_multiplier must be >= 1");
  }

  /// Accepted but unusual settings.
  std::vector<std::string> advisories() const {
    std::vector<std::string> out;
    if (pathloss_exponent < 2.0 || pathloss_exponent > 5.0) {
      std::ostringstream os;
      os << "radio.pathloss_exponent = " << pathloss_exponent
         << " is outside the usual range [2, 5]";
      out.push_back(os.str());
    }
    return out;
  }

  void validate() const {
    check();
    for (const auto& message : advisories())
      warn(message);
  }
};

/// Power received at distance `r` from a transmitter. `r` must be positive.
inline double received_power(const RadioParams& params, double r) {
  if (!(r > 0.0))
    throw Error("received_power: distance must be positive (co-located nodes)");
  return params.transmit_power /
         (params.pathloss_constant * std::pow(r, params.pathloss_exponent));
}

/// Link condition against an aggregate noise level, inclusive at equality.
inline bool link_ok(const RadioParams& params, double r, double total_noise) {
  if (!(total_noise > 0.0))
    throw Error("link_ok: total noise must be positive");
  return received_power(params, r) / total_noise >= params.sensitivity_threshold;
}

/// Largest distance at which a link survives against the noise floor alone.
inline double transmission_range(const RadioParams& params) {
  return std::pow(params.transmit_power /
                      (params.pathloss_constant * params.sensitivity_threshold *
                       params.noise),
                  1.0 / params.pathloss_exponent);
}

inline double interference_range(const RadioParams& params) {
  return params.interference_multiplier * transmission_range(params);
}

/// Noise level for which `transmission_range` equals `range`, keeping the
/// other parameters. Used when a configuration fixes the range directly.
inline double noise_for_range(const RadioParams& params, double range) {
  return params.transmit_power /
         (params.pathloss_constant * params.sensitivity_threshold *
          std::pow(range, params.pathloss_exponent));
}

/// SINR test on precomputed received powers. Interference is accumulated
/// onto the noise floor in list order.
inline bool sinr_ok_powers(const RadioParams& params, double signal_power,
                           std::span<const double> interferer_powers) {
  double total = params.noise;
  for (double p : interferer_powers)
    total += p;
  return signal_power / total >= params.sensitivity_threshold;
}

/// Reception of a signal from distance `r_signal` while every transmitter
/// in `interferer_distances` adds its received power to the noise floor.
inline bool sinr_ok(const RadioParams& params, double r_signal,
                    std::span<const double> interferer_distances) {
  const double signal = received_power(params, r_signal);
  double total = params.noise;
  for (double d : interferer_distances)
    total += received_power(params, d);
  return signal / total >= params.sensitivity_threshold;
}

} // namespace wanet
