#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace neuroloop {

using Timestep = std::int64_t;

/// Sentinel decay constant for non-leaky neurons.
inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

struct EngineConfig {
  std::int64_t timestep_us = 50;
  std::uint64_t seed = 0;  // reserved; stepping itself is fully deterministic
};

/// Per-step membrane multiplier exp(-1/tau) for a leak constant given in
/// timesteps. Returns 1.0 for kNoDecay. Throws ConfigError for tau < 1.
double decay_factor(double decay_tau);

struct PopulationConfig {
  std::string name;
  std::uint32_t size = 0;
  double threshold = 1.0;
  double decay_tau = 1.0;            // timesteps; kNoDecay disables the leak
  std::uint32_t refractory = 0;      // timesteps a neuron cannot spike after firing
  std::int32_t self_excitation = 0;  // delivered to the firing neuron one step later
  std::int32_t input_weight = 1;     // increment per injected input spike
  bool winner_take_all = false;      // at most one spike/step: highest V, lowest index on ties

  // Optional per-neuron threshold override (size() == size when used).
  std::vector<double> thresholds;
};

/// Read-only view of one neuron, mainly for tests and debugging.
struct NeuronState {
  double membrane_potential = 0.0;
  double threshold = 0.0;
  double decay_tau = 0.0;
  std::uint32_t refractory_remaining = 0;
  std::int32_t self_excitation_weight = 0;
};

}  // namespace neuroloop
