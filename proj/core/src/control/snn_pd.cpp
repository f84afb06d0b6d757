#include "neuroloop/control/snn_pd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "neuroloop/errors.hpp"

namespace neuroloop {

namespace {

std::uint32_t encode_lattice(double value, double range, std::uint32_t bins) {
  const std::uint32_t center = bins / 2;
  const double bin_width = 2.0 * range / (bins - 1);
  const auto idx = static_cast<std::int64_t>(center) +
                   static_cast<std::int64_t>(std::llround(value / bin_width));
  return static_cast<std::uint32_t>(
      std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(bins) - 1));
}

}  // namespace

Engine SnnPdController::make_engine(const SnnPdConfig& config, AdaptationIds& adapt_ids) {
  if (config.bins < 3 || config.bins % 2 == 0) {
    throw ConfigError("SnnPdController: bins must be odd and at least 3");
  }
  if (config.steps_per_tick == 0) throw ConfigError("SnnPdController: steps_per_tick must be positive");

  const std::uint32_t bins = config.bins;
  const std::uint32_t center = bins / 2;
  SnnNetwork net;

  PopulationConfig pop;
  pop.name = "error";
  pop.size = bins;
  const std::uint32_t error_pop = net.add_population(pop);
  pop.name = "rate";
  const std::uint32_t rate_pop = net.add_population(pop);

  pop.name = "coincidence";
  pop.size = bins * bins;
  pop.threshold = config.coincidence_threshold;
  pop.decay_tau = config.grid_decay_tau;
  const std::uint32_t grid_pop = net.add_population(pop);

  pop.name = "output";
  pop.size = bins;
  pop.threshold = 1.0;
  pop.decay_tau = 1.0;
  const std::uint32_t out_pop = net.add_population(pop);

  std::vector<SynapseTriplet> rows;
  std::vector<SynapseTriplet> cols;
  rows.reserve(static_cast<std::size_t>(bins) * bins);
  cols.reserve(static_cast<std::size_t>(bins) * bins);
  for (std::uint32_t i = 0; i < bins; ++i) {
    for (std::uint32_t j = 0; j < bins; ++j) {
      rows.push_back({i, i * bins + j, 1});
      cols.push_back({j, i * bins + j, 1});
    }
  }
  net.add_synapses(SynapseSet("error_rows", error_pop, grid_pop, SynapseSign::excitatory, bins,
                              bins * bins, std::move(rows)));
  net.add_synapses(SynapseSet("rate_columns", rate_pop, grid_pop, SynapseSign::excitatory, bins,
                              bins * bins, std::move(cols)));

  const OutputDecode decode{bins, -kCommandLimit / 2.0, kCommandLimit / 2.0};
  const double u_step = decode.step();
  const double error_bin = 2.0 * config.error_range_deg / (bins - 1);
  const double rate_bin = 2.0 * config.rate_range_dps / (bins - 1);
  const double gp = config.kp * error_bin / u_step;
  const double gd = config.kd * rate_bin / u_step;

  std::vector<SynapseTriplet> readout;
  readout.reserve(static_cast<std::size_t>(bins) * bins);
  for (std::uint32_t i = 0; i < bins; ++i) {
    for (std::uint32_t j = 0; j < bins; ++j) {
      const double k = center + gp * (static_cast<double>(i) - center) +
                       gd * (static_cast<double>(j) - center);
      const auto out = static_cast<std::uint32_t>(std::clamp<std::int64_t>(
          std::llround(k), 0, static_cast<std::int64_t>(bins) - 1));
      readout.push_back({i * bins + j, out, 1});
    }
  }
  net.add_synapses(SynapseSet("grid_readout", grid_pop, out_pop, SynapseSign::excitatory,
                              bins * bins, bins, std::move(readout)));

  if (config.adaptation) {
    adapt_ids = attach_adaptation(net, error_pop, bins, error_bin, config.adaptation_config,
                                  config.timestep_us);
  }

  EngineConfig engine_config;
  engine_config.timestep_us = config.timestep_us;
  return Engine(engine_config, std::move(net));
}

SnnPdController::SnnPdController(const SnnPdConfig& config)
    : config_(config),
      decode_{config.bins, -kCommandLimit / 2.0, kCommandLimit / 2.0},
      engine_(make_engine(config, adapt_ids_)),
      out_index_(config.bins / 2) {
  error_pop_ = engine_.network().population_id("error");
  rate_pop_ = engine_.network().population_id("rate");
  out_pop_ = engine_.network().population_id("output");
}

std::uint32_t SnnPdController::encode_error(double error_deg) const {
  return encode_lattice(error_deg, config_.error_range_deg, config_.bins);
}

std::uint32_t SnnPdController::encode_rate(double rate_dps) const {
  return encode_lattice(rate_dps, config_.rate_range_dps, config_.bins);
}

std::uint32_t SnnPdController::output_index_for(std::uint32_t i, std::uint32_t j) const {
  const std::uint32_t bins = config_.bins;
  const std::uint32_t center = bins / 2;
  const double u_step = decode_.step();
  const double gp = config_.kp * (2.0 * config_.error_range_deg / (bins - 1)) / u_step;
  const double gd = config_.kd * (2.0 * config_.rate_range_dps / (bins - 1)) / u_step;
  const double k = center + gp * (static_cast<double>(i) - center) +
                   gd * (static_cast<double>(j) - center);
  return static_cast<std::uint32_t>(
      std::clamp<std::int64_t>(std::llround(k), 0, static_cast<std::int64_t>(bins) - 1));
}

double SnnPdController::tick(double error_deg, double error_rate_dps) {
  SpikeBatch input;
  input.timestep = engine_.next_timestep();
  input.spikes.push_back({error_pop_, encode_error(error_deg)});
  input.spikes.push_back({rate_pop_, encode_rate(error_rate_dps)});
  if (config_.adaptation) {
    input.spikes.push_back({adapt_ids_.ffplus, 0});
    input.spikes.push_back({adapt_ids_.ffminus, 0});
  }

  std::uint32_t bank_count = 0;
  for (std::uint32_t s = 0; s < config_.steps_per_tick; ++s) {
    const SpikeBatch& out = s == 0 ? engine_.step(input) : engine_.step();
    for (const Spike& spike : out.spikes) {
      if (spike.population == out_pop_) {
        out_index_ = spike.neuron;
      } else if (config_.adaptation && spike.population == adapt_ids_.bank) {
        ++bank_count;
      }
    }
  }
  if (config_.adaptation) {
    // The tick clock guarantees one bank readout per tick, so a silent bank
    // really means zero active rows.
    ff_ = config_.adaptation_config.ff_gain *
          (static_cast<double>(bank_count) - config_.adaptation_config.bank_bias);
  }
  const double u = decode_.decode(out_index_) + ff_;
  return std::clamp(u, -kCommandLimit, kCommandLimit);
}

}  // namespace neuroloop
