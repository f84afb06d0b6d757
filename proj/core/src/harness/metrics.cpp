#include "neuroloop/harness/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "neuroloop/errors.hpp"

namespace neuroloop {

double mean(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double s : samples) sum += s;
  return sum / static_cast<double>(samples.size());
}

double rmse(std::span<const double> error) {
  if (error.empty()) return 0.0;
  double sum = 0.0;
  for (double e : error) sum += e * e;
  return std::sqrt(sum / static_cast<double>(error.size()));
}

DelayFit delay_corrected_rmse(std::span<const double> reference,
                              std::span<const double> response,
                              std::size_t analysis_start,
                              std::optional<double> wrap_period, int max_shift_ms,
                              int min_valid_ms, int max_valid_ms) {
  if (reference.size() != response.size()) {
    throw InputError("delay fit: trace lengths differ");
  }
  const std::size_t n = reference.size();
  if (analysis_start >= n) throw InputError("delay fit: analysis window is empty");
  if (max_shift_ms < 0) throw InputError("delay fit: negative shift range");

  // Sub-millisecond shifts interpolate the reference linearly, so a fast ramp
  // does not leave a quantization offset (at 1200 deg/s a whole-sample grid
  // could be off by up to 0.6 deg of DC residual).
  const auto residual_rmse = [&](std::size_t whole, double frac) {
    const std::size_t start = std::max(analysis_start, whole + (frac > 0.0 ? 1 : 0));
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = start; i < n; ++i) {
      const double ref = frac > 0.0
                             ? reference[i - whole] * (1.0 - frac) + reference[i - whole - 1] * frac
                             : reference[i - whole];
      double e = response[i] - ref;
      if (wrap_period) e = std::remainder(e, *wrap_period);
      sum += e * e;
      ++count;
    }
    if (count == 0) throw InputError("delay fit: shift exhausts the analysis window");
    return std::sqrt(sum / static_cast<double>(count));
  };

  DelayFit fit;
  fit.raw_rmse_deg = residual_rmse(0, 0.0);
  fit.rmse_deg = fit.raw_rmse_deg;
  constexpr int kStepsPerMs = 10;
  int best = 0;
  for (int step = 1; step <= max_shift_ms * kStepsPerMs; ++step) {
    const std::size_t whole = static_cast<std::size_t>(step / kStepsPerMs);
    const double frac = static_cast<double>(step % kStepsPerMs) / kStepsPerMs;
    if (whole + 1 >= n) break;
    const double r = residual_rmse(whole, frac);
    // Aliased shifts (a half turn of a wrapped ramp) tie with the true one up
    // to roundoff; demand a real improvement so the smallest shift of a tie
    // family wins.
    if (r < fit.rmse_deg * (1.0 - 1e-9)) {
      fit.rmse_deg = r;
      best = step;
    }
  }
  fit.delay_ms = static_cast<double>(best) / kStepsPerMs;
  fit.delay_valid = fit.delay_ms >= static_cast<double>(min_valid_ms) &&
                    fit.delay_ms <= static_cast<double>(max_valid_ms);
  return fit;
}

StepMetrics step_metrics(std::span<const double> angle_deg, std::size_t t0,
                         double from_deg, double to_deg) {
  StepMetrics m;
  if (t0 >= angle_deg.size()) return m;
  const double change = to_deg - from_deg;
  if (change == 0.0) return m;
  const double sign = change > 0 ? 1.0 : -1.0;
  const double level10 = from_deg + 0.1 * change;
  const double level90 = from_deg + 0.9 * change;

  std::optional<std::size_t> t10, t90;
  for (std::size_t i = t0; i < angle_deg.size(); ++i) {
    const double a = angle_deg[i];
    if (!t10 && sign * (a - level10) >= 0.0) t10 = i;
    if (!t90 && sign * (a - level90) >= 0.0) t90 = i;
    m.overshoot_deg = std::max(m.overshoot_deg, sign * (a - to_deg));
  }
  m.overshoot_deg = std::max(m.overshoot_deg, 0.0);
  if (t10 && t90) {
    m.rise_time_ms = static_cast<double>(*t90 - *t10);
    m.reached = true;
  }
  return m;
}

}  // namespace neuroloop
