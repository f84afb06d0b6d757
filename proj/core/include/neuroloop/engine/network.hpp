#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neuroloop/engine/config.hpp"
#include "neuroloop/engine/synapses.hpp"

namespace neuroloop {

/// Static topology: populations plus synapse sets. Built once, then stepped by
/// an Engine. Population and set lookups by name are meant for construction
/// and tests, not the hot path.
class SnnNetwork {
 public:
  std::uint32_t add_population(PopulationConfig config);
  std::uint32_t add_synapses(SynapseSet set);

  std::uint32_t population_count() const { return static_cast<std::uint32_t>(populations_.size()); }
  const PopulationConfig& population(std::uint32_t id) const { return populations_.at(id); }
  std::uint32_t population_id(const std::string& name) const;

  std::size_t synapse_set_count() const { return synapse_sets_.size(); }
  SynapseSet& synapse_set(std::size_t idx) { return synapse_sets_.at(idx); }
  const SynapseSet& synapse_set(std::size_t idx) const { return synapse_sets_.at(idx); }
  std::size_t synapse_set_id(const std::string& name) const;

  /// Indices of synapse sets whose presynaptic population is `pop`.
  const std::vector<std::uint32_t>& outgoing_sets(std::uint32_t pop) const {
    return outgoing_sets_.at(pop);
  }

  double neuron_threshold(std::uint32_t pop, std::uint32_t neuron) const;

  /// Replaces the per-neuron threshold table of an existing population. Only
  /// valid before an Engine is constructed over this network.
  void set_population_thresholds(std::uint32_t pop, std::vector<double> thresholds);

 private:
  std::vector<PopulationConfig> populations_;
  std::vector<SynapseSet> synapse_sets_;
  std::vector<std::vector<std::uint32_t>> outgoing_sets_;
};

}  // namespace neuroloop
