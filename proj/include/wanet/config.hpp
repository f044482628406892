#pragma once

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wanet/diagnostics.hpp"
#include "wanet/epidemic.hpp"

namespace wanet {

/// Full experiment description. One `seed` drives every random stream.
struct SimConfig {
  std::uint64_t seed = 1;
  Scenario scenario;
  std::optional<double> transmission_range_override;
  std::uint64_t runs = 500;
  unsigned workers = 1;
  std::vector<std::string> warnings;
};

/// Flat `key = value` text. Blank lines and `#` comments are ignored.
///
/// Recognized keys (dotted paths):
///
///   seed, n_nodes
///   domain.lx, domain.ly, domain.periodic
///   radio.transmit_power, radio.pathloss_constant, radio.pathloss_exponent,
///   radio.noise, radio.sensitivity_threshold, radio.interference_multiplier,
///   radio.transmission_range
///   mobility.model (static | random_walk | random_waypoint),
///   mobility.step_length, mobility.speed_min, mobility.speed_max,
///   mobility.pause_steps, mobility.i_update
///   epidemic.lambda, epidemic.delta,
///   epidemic.reception_mode (ideal | sinr | mac_sinr),
///   epidemic.max_steps, epidemic.initial_infected
///   ensemble.runs, ensemble.workers
///
/// `n_nodes`, `domain.lx`, `domain.ly`, `epidemic.lambda` and
/// `epidemic.delta` are required. The radio needs either
/// `radio.transmission_range` or the full set of transmit_power,
/// pathloss_constant, pathloss_exponent, noise and sensitivity_threshold.
using ConfigEntries = std::map<std::string, std::string, std::less<>>;

class ConfigError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace detail

/// Splits config text into entries. Duplicate keys are an error.
inline ConfigEntries parse_entries(std::string_view text) {
  ConfigEntries out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError(key + ": duplicate key");
  }
  return out;
}

inline ConfigEntries read_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_entries(buf.str());
}

namespace detail {

class EntryReader {
public:
  explicit EntryReader(const ConfigEntries& entries) : entries_(entries) {}

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

  std::optional<double> number(std::string_view key) {
    const auto* raw = take(key);
    if (!raw)
      return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(raw->c_str(), &end);
    if (raw->empty() || end != raw->c_str() + raw->size() || errno == ERANGE ||
        !std::isfinite(v))
      throw ConfigError(std::string(key) + ": expected a finite number, got '" + *raw + "'");
    return v;
  }

  template <typename Int>
  std::optional<Int> integer(std::string_view key) {
    const auto* raw = take(key);
    if (!raw)
      return std::nullopt;
    Int v{};
    const auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
    if (raw->empty() || ec != std::errc{} || ptr != raw->data() + raw->size())
      throw ConfigError(std::string(key) + ": expected an integer, got '" + *raw + "'");
    return v;
  }

  std::optional<bool> boolean(std::string_view key) {
    const auto* raw = take(key);
    if (!raw)
      return std::nullopt;
    if (*raw == "true" || *raw == "1")
      return true;
    if (*raw == "false" || *raw == "0")
      return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + *raw + "'");
  }

  std::optional<std::string> word(std::string_view key) {
    const auto* raw = take(key);
    if (!raw)
      return std::nullopt;
    return *raw;
  }

  template <typename T>
  T required(std::optional<T> v, std::string_view key) {
    if (!v)
      throw ConfigError(std::string(key) + ": missing required key");
    return *v;
  }

  void reject_unused() const {
    for (const auto& [key, value] : entries_)
      if (used_.find(key) == used_.end())
        throw ConfigError(key + ": unknown key");
  }

private:
  const std::string* take(std::string_view key) {
    const auto it = entries_.find(key);
    if (it == entries_.end())
      return nullptr;
    used_.emplace(it->first);
    return &it->second;
  }

  const ConfigEntries& entries_;
  std::set<std::string, std::less<>> used_;
};

} // namespace detail

/// Builds and validates a configuration. Every failure names the
/// offending key.
inline SimConfig parse_config(const ConfigEntries& entries) {
  detail::EntryReader rd(entries);
  SimConfig cfg;
  Scenario& sc = cfg.scenario;

  cfg.seed = rd.integer<std::uint64_t>("seed").value_or(cfg.seed);

  const auto n_nodes = rd.required(rd.integer<std::int64_t>("n_nodes"), "n_nodes");
  if (n_nodes < 1)
    throw ConfigError("n_nodes must be >= 1");
  sc.n_nodes = static_cast<std::size_t>(n_nodes);

  sc.domain.lx = rd.required(rd.number("domain.lx"), "domain.lx");
  sc.domain.ly = rd.required(rd.number("domain.ly"), "domain.ly");
  sc.domain.periodic = rd.boolean("domain.periodic").value_or(true);
  if (!(sc.domain.lx > 0.0))
    throw ConfigError("domain.lx must be > 0");
  if (!(sc.domain.ly > 0.0))
    throw ConfigError("domain.ly must be > 0");

  // Radio: raw parameters, a range override, or both (override wins).
  static constexpr std::string_view raw_keys[] = {
      "radio.transmit_power", "radio.pathloss_constant", "radio.pathloss_exponent",
      "radio.noise", "radio.sensitivity_threshold"};
  RadioParams& radio = sc.radio;
  const auto power = rd.number("radio.transmit_power");
  const auto constant = rd.number("radio.pathloss_constant");
  const auto exponent = rd.number("radio.pathloss_exponent");
  const auto noise = rd.number("radio.noise");
  const auto threshold = rd.number("radio.sensitivity_threshold");
  radio.interference_multiplier =
      rd.number("radio.interference_multiplier").value_or(radio.interference_multiplier);
  cfg.transmission_range_override = rd.number("radio.transmission_range");
  radio.transmit_power = power.value_or(radio.transmit_power);
  radio.pathloss_constant = constant.value_or(radio.pathloss_constant);
  radio.pathloss_exponent = exponent.value_or(radio.pathloss_exponent);
  radio.noise = noise.value_or(radio.noise);
  radio.sensitivity_threshold = threshold.value_or(radio.sensitivity_threshold);

  if (cfg.transmission_range_override) {
    const double range = *cfg.transmission_range_override;
    if (!(range > 0.0))
      throw ConfigError("radio.transmission_range must be > 0");
    if (noise) {
      cfg.warnings.emplace_back(
          "radio.transmission_range overrides the range implied by the raw radio "
          "parameters; radio.noise is recomputed to match");
    }
    radio.noise = noise_for_range(radio, range);
  } else {
    for (auto key : raw_keys)
      if (!rd.has(key))
        throw ConfigError(std::string(key) +
                          ": missing required key (or set radio.transmission_range)");
  }
  try {
    radio.check();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (auto& message : radio.advisories())
    cfg.warnings.push_back(std::move(message));

  const auto model = rd.word("mobility.model").value_or("random_walk");
  const auto step_length = rd.number("mobility.step_length");
  const auto speed_min = rd.number("mobility.speed_min");
  const auto speed_max = rd.number("mobility.speed_max");
  const auto pause_steps = rd.integer<int>("mobility.pause_steps");
  sc.mobility.i_update = rd.integer<int>("mobility.i_update").value_or(1);
  if (model == "static") {
    sc.mobility.variant = Static{};
  } else if (model == "random_walk") {
    sc.mobility.variant = RandomWalk{step_length.value_or(RandomWalk{}.step_length)};
  } else if (model == "random_waypoint") {
    RandomWaypoint wp;
    wp.speed_min = speed_min.value_or(wp.speed_min);
    wp.speed_max = speed_max.value_or(wp.speed_max);
    wp.pause_steps = pause_steps.value_or(wp.pause_steps);
    sc.mobility.variant = wp;
  } else {
    throw ConfigError("mobility.model: expected static, random_walk or random_waypoint, got '" +
                      model + "'");
  }

  EpidemicParams& ep = sc.epidemic;
  ep.lambda = rd.required(rd.number("epidemic.lambda"), "epidemic.lambda");
  ep.delta = rd.required(rd.number("epidemic.delta"), "epidemic.delta");
  const auto mode = rd.word("epidemic.reception_mode").value_or("ideal");
  if (mode == "ideal")
    ep.reception_mode = ReceptionMode::Ideal;
  else if (mode == "sinr")
    ep.reception_mode = ReceptionMode::Sinr;
  else if (mode == "mac_sinr")
    ep.reception_mode = ReceptionMode::MacSinr;
  else
    throw ConfigError("epidemic.reception_mode: expected ideal, sinr or mac_sinr, got '" +
                      mode + "'");
  ep.max_steps = rd.integer<int>("epidemic.max_steps").value_or(ep.max_steps);
  ep.initial_infected = rd.integer<int>("epidemic.initial_infected").value_or(1);

  cfg.runs = rd.integer<std::uint64_t>("ensemble.runs").value_or(cfg.runs);
  cfg.workers = rd.integer<unsigned>("ensemble.workers").value_or(cfg.workers);
  if (cfg.runs < 1)
    throw ConfigError("ensemble.runs must be >= 1");
  if (cfg.workers < 1)
    throw ConfigError("ensemble.workers must be >= 1");

  rd.reject_unused();

  // Module-level checks; their messages already carry the key path.
  try {
    sc.mobility.validate(sc.domain);
    ep.validate(sc.n_nodes);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline SimConfig parse_config(std::string_view text) { return parse_config(parse_entries(text)); }

/// Applies `key=value` overrides on top of file entries.
inline void apply_overrides(ConfigEntries& entries, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + item + "': expected key=value");
    entries[std::string(detail::trim(std::string_view(item).substr(0, eq)))] =
        std::string(detail::trim(std::string_view(item).substr(eq + 1)));
  }
}

} // namespace wanet
