#include "neuroloop/control/adaptation.hpp"

#include <cmath>
#include <vector>

#include "neuroloop/errors.hpp"

namespace neuroloop {

double AdaptationConfig::trigger_threshold() const {
  const double ticks = window_ms / tick_ms;
  const double boundary_drive = error_weight_scale * std::sqrt(mse_threshold_deg_sq);
  return std::round((1.0 - std::exp(-1.0)) * ticks * boundary_drive);
}

double AdaptationConfig::trigger_decay_tau(std::int64_t timestep_us) const {
  return window_ms * 1000.0 / static_cast<double>(timestep_us);
}

AdaptationIds attach_adaptation(SnnNetwork& network, std::uint32_t error_population,
                                std::uint32_t error_bins, double error_bin_deg,
                                const AdaptationConfig& config, std::int64_t timestep_us) {
  if (config.bank_size == 0 || config.bank_bias < 0 ||
      static_cast<std::uint32_t>(config.bank_bias) > config.bank_size) {
    throw ConfigError("adaptation: bank_bias must lie within the bank");
  }
  if (config.window_ms <= 0.0 || config.tick_ms <= 0.0 || config.mse_threshold_deg_sq <= 0.0) {
    throw ConfigError("adaptation: window, tick and threshold must be positive");
  }
  if (error_bins % 2 == 0) throw ConfigError("adaptation: error population needs a center bin");

  AdaptationIds ids;
  PopulationConfig acc;
  acc.name = "rplus";
  acc.size = 1;
  acc.threshold = config.trigger_threshold();
  acc.decay_tau = config.trigger_decay_tau(timestep_us);
  ids.rplus = network.add_population(acc);
  acc.name = "rminus";
  ids.rminus = network.add_population(acc);

  PopulationConfig relay;
  relay.name = "ffplus";
  relay.size = 1;
  ids.ffplus = network.add_population(relay);
  relay.name = "ffminus";
  ids.ffminus = network.add_population(relay);

  PopulationConfig bank;
  bank.name = "bank";
  bank.size = config.bank_size;
  bank.thresholds.resize(config.bank_size);
  for (std::uint32_t m = 0; m < config.bank_size; ++m) bank.thresholds[m] = m + 1.0;
  ids.bank = network.add_population(bank);

  const std::uint32_t center = error_bins / 2;
  std::vector<SynapseTriplet> to_plus;
  std::vector<SynapseTriplet> to_minus;
  for (std::uint32_t i = 0; i < error_bins; ++i) {
    const double err = (static_cast<double>(i) - center) * error_bin_deg;
    const auto w =
        static_cast<std::int32_t>(std::llround(config.error_weight_scale * std::abs(err)));
    if (w == 0) continue;
    if (err > 0.0) {
      to_plus.push_back({i, 0, w});
    } else {
      to_minus.push_back({i, 0, w});
    }
  }
  network.add_synapses(SynapseSet("error_to_rplus", error_population, ids.rplus,
                                  SynapseSign::excitatory, error_bins, 1, std::move(to_plus)));
  network.add_synapses(SynapseSet("error_to_rminus", error_population, ids.rminus,
                                  SynapseSign::excitatory, error_bins, 1, std::move(to_minus)));

  PlasticityRule rule;
  rule.adapt_sign = +1;
  rule.w_min = 0;
  rule.w_max = static_cast<std::int32_t>(config.bank_size);

  std::vector<SynapseTriplet> plus_drive;
  std::vector<SynapseTriplet> minus_drive;
  for (std::uint32_t m = 0; m < config.bank_size; ++m) {
    plus_drive.push_back({0, m, config.bank_bias});
    minus_drive.push_back({0, m, 0});
  }
  rule.reinforcement_population = ids.rplus;
  rule.reinforcement_neuron = 0;
  ids.wplus_set =
      network.add_synapses(SynapseSet("ff_drive_up", ids.ffplus, ids.bank,
                                      SynapseSign::excitatory, 1, config.bank_size,
                                      std::move(plus_drive), rule));
  rule.reinforcement_population = ids.rminus;
  ids.wminus_set =
      network.add_synapses(SynapseSet("ff_drive_down", ids.ffminus, ids.bank,
                                      SynapseSign::inhibitory, 1, config.bank_size,
                                      std::move(minus_drive), rule));
  return ids;
}

bool adaptation_trigger_check(std::span<const double> error_window_deg, double threshold_deg_sq) {
  if (error_window_deg.empty()) return false;
  double sum_sq = 0.0;
  for (double e : error_window_deg) sum_sq += e * e;
  return sum_sq / static_cast<double>(error_window_deg.size()) >= threshold_deg_sq;
}

}  // namespace neuroloop
