#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace neuroloop {

double mean(std::span<const double> samples);
double rmse(std::span<const double> error);

struct DelayFit {
  double rmse_deg = 0.0;      // residual at the fitted shift
  double delay_ms = 0.0;      // fitted shift
  bool delay_valid = false;   // shift landed inside the physical band
  double raw_rmse_deg = 0.0;  // zero-shift residual, for reference
};

/// Residual between a reference trajectory and a delayed response over
/// uniformly sampled 1 kHz traces, minimized over 0.1 ms shifts in
/// [0, max_shift_ms] (ties resolve to the smaller shift). Sub-sample shifts
/// interpolate the reference linearly, so it should be a continuous
/// (unwrapped) trace. Only samples at or after `analysis_start` enter the
/// fit. With `wrap_period` set the residuals are taken on the circle of that
/// period (180 for line angles). The fitted delay counts as valid when it
/// lies in [min_valid_ms, max_valid_ms], rejecting fits that pin to the
/// search edge.
DelayFit delay_corrected_rmse(std::span<const double> reference,
                              std::span<const double> response,
                              std::size_t analysis_start,
                              std::optional<double> wrap_period = std::nullopt,
                              int max_shift_ms = 300, int min_valid_ms = 50,
                              int max_valid_ms = 300);

struct StepMetrics {
  double rise_time_ms = 0.0;   // 10% to 90% of the commanded change
  double overshoot_deg = 0.0;  // peak excursion past the target, >= 0
  bool reached = false;        // the 90% level was crossed
};

/// Analyzes one step transition on a 1 kHz angle trace starting at `t0`.
StepMetrics step_metrics(std::span<const double> angle_deg, std::size_t t0,
                         double from_deg, double to_deg);

}  // namespace neuroloop
