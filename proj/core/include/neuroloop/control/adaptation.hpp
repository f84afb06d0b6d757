#pragma once

#include <cstdint>
#include <span>

#include "neuroloop/engine/network.hpp"

namespace neuroloop {

/// Slow feed-forward trimming circuit. Two accumulator neurons integrate the
/// magnitude of the signed error (one per sign) with a leak matched to the
/// monitoring window; when one crosses its threshold it fires, nudging a
/// uniform plastic weight that shifts how many rows of a threshold bank turn
/// on each control tick. The active-row count, read back as spikes, sets the
/// feed-forward command.
struct AdaptationConfig {
  double window_ms = 500.0;            // monitoring period the leak realizes
  double mse_threshold_deg_sq = 25.0;  // engage when windowed mean err^2 reaches this
  double error_weight_scale = 8.0;     // accumulator drive = round(scale * |error_deg|)
  std::uint32_t bank_size = 64;
  std::int32_t bank_bias = 32;         // initial active rows = feed-forward zero point
  double ff_gain = 18.75;              // command units per bank row
  double tick_ms = 1.0;                // control tick period feeding the accumulators

  /// Accumulator threshold: the level a constant boundary-size error
  /// (sqrt of the mean-square threshold) reaches after one window of
  /// leaky integration, (1 - 1/e) of its asymptote.
  double trigger_threshold() const;

  /// Leak constant in engine timesteps equivalent to the monitoring window.
  double trigger_decay_tau(std::int64_t timestep_us) const;
};

struct AdaptationIds {
  std::uint32_t rplus = 0;   // accumulator for positive error
  std::uint32_t rminus = 0;  // accumulator for negative error
  std::uint32_t ffplus = 0;  // clock relays, one spike per control tick
  std::uint32_t ffminus = 0;
  std::uint32_t bank = 0;
  std::size_t wplus_set = 0;
  std::size_t wminus_set = 0;
};

/// Wires the circuit onto an existing error population whose index i encodes
/// the error (i - center) * error_bin_deg.
AdaptationIds attach_adaptation(SnnNetwork& network, std::uint32_t error_population,
                                std::uint32_t error_bins, double error_bin_deg,
                                const AdaptationConfig& config = {},
                                std::int64_t timestep_us = 50);

/// Reference predicate the accumulator neurons approximate: given a window of
/// error samples (1 kHz), the trim should engage when the mean squared error
/// is at or above `threshold_deg_sq`.
bool adaptation_trigger_check(std::span<const double> error_window_deg,
                              double threshold_deg_sq = 25.0);

}  // namespace neuroloop
