#include "neuroloop/engine/network.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "neuroloop/engine/spike.hpp"
#include "neuroloop/errors.hpp"

namespace neuroloop {

double decay_factor(double decay_tau) {
  if (decay_tau == kNoDecay) return 1.0;
  if (!(decay_tau >= 1.0)) {
    throw ConfigError("decay_tau must be >= 1 timestep or kNoDecay");
  }
  return std::exp(-1.0 / decay_tau);
}

SynapseSet::SynapseSet(std::string name, std::uint32_t pre_population,
                       std::uint32_t post_population, SynapseSign sign, std::uint32_t pre_size,
                       std::uint32_t post_size, std::vector<SynapseTriplet> triplets,
                       std::optional<PlasticityRule> plasticity, std::string generator)
    : name_(std::move(name)),
      pre_population_(pre_population),
      post_population_(post_population),
      sign_(sign),
      plasticity_(std::move(plasticity)),
      generator_(std::move(generator)) {
  for (const auto& t : triplets) {
    if (t.pre >= pre_size || t.post >= post_size) {
      throw ConfigError("synapse set '" + name_ + "': edge index out of range");
    }
    if (t.weight < 0) {
      throw ConfigError("synapse set '" + name_ + "': weights are magnitudes and must be >= 0");
    }
  }
  if (plasticity_) {
    if (plasticity_->adapt_sign != 1 && plasticity_->adapt_sign != -1) {
      throw ConfigError("synapse set '" + name_ + "': adapt_sign must be +1 or -1");
    }
    if (plasticity_->w_min > plasticity_->w_max) {
      throw ConfigError("synapse set '" + name_ + "': w_min > w_max");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const SynapseTriplet& a, const SynapseTriplet& b) {
                     return a.pre != b.pre ? a.pre < b.pre : a.post < b.post;
                   });
  row_offsets_.assign(pre_size + 1, 0);
  targets_.reserve(triplets.size());
  weights_.reserve(triplets.size());
  for (const auto& t : triplets) {
    ++row_offsets_[t.pre + 1];
    targets_.push_back(t.post);
    weights_.push_back(t.weight);
  }
  for (std::uint32_t i = 0; i < pre_size; ++i) {
    row_offsets_[i + 1] += row_offsets_[i];
  }
}

std::span<const std::uint32_t> SynapseSet::row_targets(std::uint32_t pre) const {
  const auto begin = row_offsets_.at(pre);
  const auto end = row_offsets_.at(pre + 1);
  return {targets_.data() + begin, end - begin};
}

std::span<const std::int32_t> SynapseSet::row_weights(std::uint32_t pre) const {
  const auto begin = row_offsets_.at(pre);
  const auto end = row_offsets_.at(pre + 1);
  return {weights_.data() + begin, end - begin};
}

std::int32_t SynapseSet::adapt() {
  if (!plasticity_) return 0;
  const auto& rule = *plasticity_;
  std::int32_t applied = 0;
  for (auto& w : weights_) {
    const std::int32_t next = std::clamp(w + rule.adapt_sign, rule.w_min, rule.w_max);
    if (next != w) {
      w = next;
      applied = rule.adapt_sign;
    }
  }
  return applied;
}

std::uint32_t SnnNetwork::add_population(PopulationConfig config) {
  if (config.size == 0) throw ConfigError("population '" + config.name + "': size must be > 0");
  if (!config.thresholds.empty() && config.thresholds.size() != config.size) {
    throw ConfigError("population '" + config.name + "': thresholds size mismatch");
  }
  const double min_threshold =
      config.thresholds.empty()
          ? config.threshold
          : *std::min_element(config.thresholds.begin(), config.thresholds.end());
  if (!(min_threshold > 0.0)) {
    throw ConfigError("population '" + config.name + "': thresholds must be positive");
  }
  decay_factor(config.decay_tau);  // validates tau
  for (const auto& p : populations_) {
    if (p.name == config.name) throw ConfigError("duplicate population name '" + config.name + "'");
  }
  populations_.push_back(std::move(config));
  outgoing_sets_.emplace_back();
  return static_cast<std::uint32_t>(populations_.size() - 1);
}

std::uint32_t SnnNetwork::add_synapses(SynapseSet set) {
  if (set.pre_population() >= populations_.size() || set.post_population() >= populations_.size()) {
    throw ConfigError("synapse set '" + set.name() + "': unknown population");
  }
  if (set.plasticity()) {
    const auto& rule = *set.plasticity();
    if (rule.reinforcement_population >= populations_.size() ||
        rule.reinforcement_neuron >= populations_[rule.reinforcement_population].size) {
      throw ConfigError("synapse set '" + set.name() + "': bad reinforcement source");
    }
  }
  for (const auto& s : synapse_sets_) {
    if (s.name() == set.name()) throw ConfigError("duplicate synapse set name '" + set.name() + "'");
  }
  const auto id = static_cast<std::uint32_t>(synapse_sets_.size());
  outgoing_sets_[set.pre_population()].push_back(id);
  synapse_sets_.push_back(std::move(set));
  return id;
}

std::uint32_t SnnNetwork::population_id(const std::string& name) const {
  for (std::uint32_t i = 0; i < populations_.size(); ++i) {
    if (populations_[i].name == name) return i;
  }
  throw ConfigError("unknown population '" + name + "'");
}

std::size_t SnnNetwork::synapse_set_id(const std::string& name) const {
  for (std::size_t i = 0; i < synapse_sets_.size(); ++i) {
    if (synapse_sets_[i].name() == name) return i;
  }
  throw ConfigError("unknown synapse set '" + name + "'");
}

void SnnNetwork::set_population_thresholds(std::uint32_t pop, std::vector<double> thresholds) {
  auto& cfg = populations_.at(pop);
  if (!thresholds.empty()) {
    if (thresholds.size() != cfg.size) {
      throw ConfigError("population '" + cfg.name + "': thresholds size mismatch");
    }
    for (const double t : thresholds) {
      if (!(t > 0.0)) throw ConfigError("population '" + cfg.name + "': thresholds must be positive");
    }
  }
  cfg.thresholds = std::move(thresholds);
}

double SnnNetwork::neuron_threshold(std::uint32_t pop, std::uint32_t neuron) const {
  const auto& p = populations_.at(pop);
  if (neuron >= p.size) throw ConfigError("neuron index out of range");
  return p.thresholds.empty() ? p.threshold : p.thresholds[neuron];
}

void write_spike_trace_header(std::ostream& out) {
  out << "timestep,population,neuron_index\n";
}

void write_spike_trace(std::ostream& out, const SnnNetwork& network, const SpikeBatch& batch) {
  for (const auto& s : batch.spikes) {
    out << batch.timestep << ',' << network.population(s.population).name << ',' << s.neuron
        << '\n';
  }
}

}  // namespace neuroloop
