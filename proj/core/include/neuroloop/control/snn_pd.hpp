#pragma once

#include <cstdint>

#include "neuroloop/control/adaptation.hpp"
#include "neuroloop/control/decode.hpp"
#include "neuroloop/engine/engine.hpp"

namespace neuroloop {

/// Spiking proportional-derivative controller. Error and error rate are
/// injected as one-hot spikes into two encoding populations; a coincidence
/// grid (one cell per index pair) maps each pair to an output neuron whose
/// index realizes round(center + gp*(i-center) + gd*(j-center)); decoding the
/// output spike recovers the PD command to within one lattice step.
struct SnnPdConfig {
  double kp = 34.9;               // command units per degree
  double kd = 10.47;              // command units per degree/s
  std::uint32_t bins = 361;
  double error_range_deg = 90.0;  // encoders span +-range over (bins-1) steps
  double rate_range_dps = 1500.0;
  std::int32_t coincidence_threshold = 2;
  double grid_decay_tau = 1.0;
  std::int64_t timestep_us = 50;
  std::uint32_t steps_per_tick = 20;  // engine steps per control tick
  bool adaptation = false;
  AdaptationConfig adaptation_config{};
};

class SnnPdController {
 public:
  explicit SnnPdController(const SnnPdConfig& config = {});

  /// One control tick: encodes the inputs, runs the network for a tick's
  /// worth of timesteps, returns the clamped motor command including any
  /// feed-forward trim.
  double tick(double error_deg, double error_rate_dps);

  double pd_output() const { return decode_.decode(out_index_); }
  double feed_forward() const { return ff_; }
  std::uint32_t last_output_index() const { return out_index_; }

  std::uint32_t encode_error(double error_deg) const;
  std::uint32_t encode_rate(double rate_dps) const;
  /// Output index wired for grid cell (error index, rate index).
  std::uint32_t output_index_for(std::uint32_t i, std::uint32_t j) const;

  const SnnPdConfig& config() const { return config_; }
  const OutputDecode& output_decode() const { return decode_; }
  const AdaptationIds& adaptation_ids() const { return adapt_ids_; }
  Engine& engine() { return engine_; }
  const Engine& engine() const { return engine_; }

 private:
  static Engine make_engine(const SnnPdConfig& config, AdaptationIds& adapt_ids);

  SnnPdConfig config_;
  OutputDecode decode_{};
  AdaptationIds adapt_ids_{};
  Engine engine_;
  std::uint32_t error_pop_ = 0;
  std::uint32_t rate_pop_ = 0;
  std::uint32_t out_pop_ = 0;
  std::uint32_t out_index_;
  double ff_ = 0.0;
};

}  // namespace neuroloop
