#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "neuroloop/engine/config.hpp"

namespace neuroloop {

struct Spike {
  std::uint32_t population = 0;
  std::uint32_t neuron = 0;

  friend bool operator==(const Spike&, const Spike&) = default;
  friend auto operator<=>(const Spike&, const Spike&) = default;
};

/// Spikes attached to one timestep. Batches emitted by the engine contain at
/// most one spike per neuron and are sorted by (population, neuron). Input
/// batches may repeat a neuron; every entry contributes one input_weight.
struct SpikeBatch {
  Timestep timestep = 0;
  std::vector<Spike> spikes;

  bool empty() const { return spikes.empty(); }
};

class SnnNetwork;

/// Appends one CSV row per spike: timestep,population,neuron_index.
/// `write_spike_trace_header` emits the column header.
void write_spike_trace_header(std::ostream& out);
void write_spike_trace(std::ostream& out, const SnnNetwork& network, const SpikeBatch& batch);

}  // namespace neuroloop
