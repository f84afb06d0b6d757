#pragma once

#include <stdexcept>
#include <string>

namespace neuroloop {

/// Invalid build-time configuration (sizes, thresholds, ranges).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input batch submitted for the wrong timestep.
struct ScheduleError : std::runtime_error {
  explicit ScheduleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed runtime input (spike indices, event coordinates).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File could not be parsed; message carries the line number.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical fault while integrating the plant (non-finite state).
struct SimulationFault : std::runtime_error {
  explicit SimulationFault(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace neuroloop
