#pragma once

#include <cstdint>
#include <vector>

#include "neuroloop/engine/config.hpp"
#include "neuroloop/engine/network.hpp"
#include "neuroloop/engine/spike.hpp"

namespace neuroloop {

struct PlasticityEvent {
  std::uint32_t synapse_set = 0;
  std::int32_t delta = 0;
};

/// Applies reinforcement-gated plasticity for one timestep: every plastic set
/// whose reinforcement neuron appears in `fired` moves all weights by its
/// adaptation sign, clamped to the set bounds. Returns one event per set that
/// was triggered.
std::vector<PlasticityEvent> apply_plasticity(SnnNetwork& network, const SpikeBatch& fired);

/// Deterministic fixed-timestep integrator for a SnnNetwork.
///
/// Step semantics: every spike travels exactly one timestep, including spikes
/// injected from outside (the input batch submitted with step t integrates
/// into membranes during step t+1, the same latency a presynaptic layer
/// would have). Within a step the order is decay, integrate, threshold:
///   V <- V * decay_factor(tau) + increments(spikes emitted at t-1)
///                              + increments(input batch t-1)
/// then neurons with V >= threshold and no remaining refractory emit a spike
/// and reset V to 0. Plasticity is applied once per step from the freshly
/// emitted spikes. Single-threaded; two engines never share state.
class Engine {
 public:
  Engine(EngineConfig config, SnnNetwork network);

  /// Advances one timestep. `input.timestep` must equal next_timestep().
  /// Returns the spikes emitted this step, sorted by (population, neuron).
  const SpikeBatch& step(const SpikeBatch& input);

  /// Convenience: step with no injected spikes.
  const SpikeBatch& step();

  Timestep next_timestep() const { return next_step_; }
  const EngineConfig& config() const { return config_; }
  const SnnNetwork& network() const { return network_; }
  SnnNetwork& network() { return network_; }

  NeuronState neuron_state(std::uint32_t pop, std::uint32_t neuron) const;
  double membrane(std::uint32_t pop, std::uint32_t neuron) const;

  const std::vector<PlasticityEvent>& last_plasticity() const { return last_plasticity_; }

 private:
  struct Population {
    std::vector<double> v;
    std::vector<Timestep> refractory_until;
    std::vector<std::uint8_t> active_flag;
    std::vector<std::uint32_t> active;
    double decay = 1.0;
  };

  void touch(Population& p, std::uint32_t idx);
  void deliver(const SpikeBatch& batch, bool from_input);

  EngineConfig config_;
  SnnNetwork network_;
  std::vector<Population> state_;
  SpikeBatch last_output_;
  SpikeBatch pending_input_;
  std::vector<PlasticityEvent> last_plasticity_;
  Timestep next_step_ = 0;

  // Membranes with |V| below this are treated as fully decayed. Far below one
  // integer weight unit, so threshold crossings are unaffected.
  static constexpr double kMembraneEpsilon = 1e-9;
};

}  // namespace neuroloop
