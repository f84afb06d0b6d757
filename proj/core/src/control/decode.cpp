#include "neuroloop/control/decode.hpp"

#include <algorithm>
#include <cmath>

#include "neuroloop/errors.hpp"

namespace neuroloop {

double OutputDecode::decode(std::uint32_t index) const {
  if (index >= bins) throw InputError("decode index out of range");
  return u_min + (u_max - u_min) * index / bins;
}

std::uint32_t OutputDecode::encode(double u) const {
  const double pos = (u - u_min) * bins / (u_max - u_min);
  const auto idx = static_cast<std::int64_t>(std::llround(pos));
  return static_cast<std::uint32_t>(std::clamp<std::int64_t>(idx, 0, bins - 1));
}

double pd_command(const PdGains& gains, double error_deg, double error_rate_dps) {
  const double u = gains.kp * error_deg + gains.kd * error_rate_dps;
  return std::clamp(u, -kCommandLimit, kCommandLimit);
}

RateEstimator::RateEstimator(std::size_t lag, double dt_s, std::optional<double> wrap_period)
    : lag_(lag), dt_s_(dt_s), wrap_period_(wrap_period), history_(lag, 0.0) {
  if (lag == 0 || dt_s <= 0.0) throw ConfigError("RateEstimator: lag and dt must be positive");
  if (wrap_period && *wrap_period <= 0.0) throw ConfigError("RateEstimator: bad wrap period");
}

double RateEstimator::push(double sample) {
  if (count_ >= lag_) {
    double diff = sample - history_[count_ % lag_];
    if (wrap_period_) diff = std::remainder(diff, *wrap_period_);
    rate_ = diff / (static_cast<double>(lag_) * dt_s_);
  }
  history_[count_ % lag_] = sample;
  ++count_;
  return rate_;
}

}  // namespace neuroloop
