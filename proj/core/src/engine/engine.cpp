#include "neuroloop/engine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neuroloop/errors.hpp"

namespace neuroloop {

std::vector<PlasticityEvent> apply_plasticity(SnnNetwork& network, const SpikeBatch& fired) {
  std::vector<PlasticityEvent> events;
  for (std::uint32_t set_id = 0; set_id < network.synapse_set_count(); ++set_id) {
    auto& set = network.synapse_set(set_id);
    if (!set.plastic()) continue;
    const auto& rule = *set.plasticity();
    const Spike key{rule.reinforcement_population, rule.reinforcement_neuron};
    if (!std::binary_search(fired.spikes.begin(), fired.spikes.end(), key)) continue;
    events.push_back({set_id, set.adapt()});
  }
  return events;
}

Engine::Engine(EngineConfig config, SnnNetwork network)
    : config_(config), network_(std::move(network)) {
  if (config_.timestep_us <= 0) throw ConfigError("timestep_us must be positive");
  state_.resize(network_.population_count());
  for (std::uint32_t p = 0; p < network_.population_count(); ++p) {
    const auto& cfg = network_.population(p);
    auto& st = state_[p];
    st.v.assign(cfg.size, 0.0);
    st.refractory_until.assign(cfg.size, -1);
    st.active_flag.assign(cfg.size, 0);
    st.decay = decay_factor(cfg.decay_tau);
  }
  pending_input_.timestep = -1;
}

void Engine::touch(Population& p, std::uint32_t idx) {
  if (!p.active_flag[idx]) {
    p.active_flag[idx] = 1;
    p.active.push_back(idx);
  }
}

void Engine::deliver(const SpikeBatch& batch, bool from_input) {
  for (const auto& s : batch.spikes) {
    if (from_input) {
      auto& st = state_[s.population];
      st.v[s.neuron] += network_.population(s.population).input_weight;
      touch(st, s.neuron);
      continue;
    }
    const auto& cfg = network_.population(s.population);
    if (cfg.self_excitation != 0) {
      auto& st = state_[s.population];
      st.v[s.neuron] += cfg.self_excitation;
      touch(st, s.neuron);
    }
    for (const auto set_id : network_.outgoing_sets(s.population)) {
      const auto& set = network_.synapse_set(set_id);
      auto& post = state_[set.post_population()];
      const double factor = set.polarity();
      const auto targets = set.row_targets(s.neuron);
      const auto weights = set.row_weights(s.neuron);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        if (weights[k] == 0) continue;
        post.v[targets[k]] += factor * weights[k];
        touch(post, targets[k]);
      }
    }
  }
}

const SpikeBatch& Engine::step(const SpikeBatch& input) {
  if (input.timestep != next_step_) {
    throw ScheduleError("input batch for step " + std::to_string(input.timestep) +
                        ", engine expects step " + std::to_string(next_step_));
  }
  for (const auto& s : input.spikes) {
    if (s.population >= network_.population_count() ||
        s.neuron >= network_.population(s.population).size) {
      throw InputError("input spike out of range: population " + std::to_string(s.population) +
                       ", neuron " + std::to_string(s.neuron));
    }
  }
  const Timestep now = next_step_;

  // Decay.
  for (auto& st : state_) {
    for (std::size_t i = 0; i < st.active.size();) {
      const auto idx = st.active[i];
      double& v = st.v[idx];
      v *= st.decay;
      if (std::abs(v) < kMembraneEpsilon) {
        v = 0.0;
        st.active_flag[idx] = 0;
        st.active[i] = st.active.back();
        st.active.pop_back();
      } else {
        ++i;
      }
    }
  }

  // Integrate spikes emitted last step, then last step's injected batch. Both
  // carry the same one-timestep propagation latency.
  deliver(last_output_, false);
  if (pending_input_.timestep == now - 1) deliver(pending_input_, true);

  // Threshold.
  SpikeBatch out;
  out.timestep = now;
  for (std::uint32_t p = 0; p < state_.size(); ++p) {
    auto& st = state_[p];
    const auto& cfg = network_.population(p);
    if (cfg.winner_take_all) {
      bool found = false;
      std::uint32_t best = 0;
      double best_v = 0.0;
      for (const auto idx : st.active) {
        if (st.refractory_until[idx] >= now) continue;
        const double v = st.v[idx];
        if (v < network_.neuron_threshold(p, idx)) continue;
        if (!found || v > best_v || (v == best_v && idx < best)) {
          found = true;
          best = idx;
          best_v = v;
        }
      }
      if (found) {
        st.v[best] = 0.0;
        st.refractory_until[best] = now + cfg.refractory;
        out.spikes.push_back({p, best});
      }
    } else {
      for (const auto idx : st.active) {
        if (st.refractory_until[idx] >= now) continue;
        if (st.v[idx] < network_.neuron_threshold(p, idx)) continue;
        st.v[idx] = 0.0;
        st.refractory_until[idx] = now + cfg.refractory;
        out.spikes.push_back({p, idx});
      }
    }
  }
  // Fired neurons keep their active-list slot; the reset membrane drops out in
  // the next decay sweep unless new input arrives first.
  std::sort(out.spikes.begin(), out.spikes.end());
  last_output_ = std::move(out);

  last_plasticity_ = apply_plasticity(network_, last_output_);

  pending_input_ = input;
  ++next_step_;
  return last_output_;
}

const SpikeBatch& Engine::step() {
  SpikeBatch empty;
  empty.timestep = next_step_;
  return step(empty);
}

NeuronState Engine::neuron_state(std::uint32_t pop, std::uint32_t neuron) const {
  const auto& cfg = network_.population(pop);
  if (neuron >= cfg.size) throw InputError("neuron index out of range");
  const auto& st = state_.at(pop);
  NeuronState ns;
  ns.membrane_potential = st.v[neuron];
  ns.threshold = network_.neuron_threshold(pop, neuron);
  ns.decay_tau = cfg.decay_tau;
  const Timestep last_done = next_step_ - 1;
  ns.refractory_remaining = st.refractory_until[neuron] > last_done
                                ? static_cast<std::uint32_t>(st.refractory_until[neuron] - last_done)
                                : 0;
  ns.self_excitation_weight = cfg.self_excitation;
  return ns;
}

double Engine::membrane(std::uint32_t pop, std::uint32_t neuron) const {
  return state_.at(pop).v.at(neuron);
}

}  // namespace neuroloop
