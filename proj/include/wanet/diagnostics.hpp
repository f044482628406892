#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wanet {

/// Raised for invalid parameters, configurations and degenerate inputs.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

namespace detail {

struct WarningSink {
  std::mutex mutex;
  WarningHandler handler;
  std::set<std::string, std::less<>> seen;
};

inline WarningSink& warning_sink() {
  static WarningSink sink;
  return sink;
}

} // namespace detail

/// Installs a handler receiving every warning (including repeats).
/// Passing an empty handler restores the default, which prints each
/// distinct message once to stderr.
inline void set_warning_handler(WarningHandler handler) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  sink.handler = std::move(handler);
  sink.seen.clear();
}

inline void warn(std::string_view message) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  if (sink.handler) {
    sink.handler(message);
    return;
  }
  if (sink.seen.find(message) != sink.seen.end())
    return;
  sink.seen.emplace(message);
  std::cerr << "warning: " << message << '\n';
}

} // namespace wanet
