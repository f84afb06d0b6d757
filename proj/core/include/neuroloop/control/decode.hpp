#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace neuroloop {

/// Final motor command magnitude limit, in thrust command units.
inline constexpr double kCommandLimit = 3700.0;

/// Linear map between a spiking output index and a thrust command. Index 0
/// decodes to u_min; the top index stops one lattice step short of u_max.
struct OutputDecode {
  std::uint32_t bins = 361;
  double u_min = -1850.0;
  double u_max = 1850.0;

  double step() const { return (u_max - u_min) / bins; }
  double decode(std::uint32_t index) const;

  /// Nearest decodable index, clamped to the lattice.
  std::uint32_t encode(double u) const;
};

struct MotorPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// Differential thrust mixer: the command splits symmetrically around a
/// hover setting, with a fixed bias so the two motors differ at zero command.
struct ThrustMap {
  double center = 2880.0;
  double bias = 170.0;

  MotorPair thrust(double u) const {
    return {center + 0.5 * u + bias, center - 0.5 * u - bias};
  }
};

struct PdGains {
  double kp = 12.0;
  double kd = 10.0;
};

/// Plain proportional-derivative law, clamped to the command limit.
double pd_command(const PdGains& gains, double error_deg, double error_rate_dps);

/// Backward difference over a fixed lag of a uniformly sampled series.
/// With a wrap period set, differences are taken on the circle (shortest
/// signed arc), which keeps line angles continuous across the +-90 seam.
class RateEstimator {
 public:
  explicit RateEstimator(std::size_t lag = 5, double dt_s = 1e-3,
                         std::optional<double> wrap_period = std::nullopt);

  /// Feeds one sample; returns the current rate (zero until `lag` samples in).
  double push(double sample);
  double rate() const { return rate_; }

 private:
  std::size_t lag_;
  double dt_s_;
  std::optional<double> wrap_period_;
  std::vector<double> history_;
  std::size_t count_ = 0;
  double rate_ = 0.0;
};

}  // namespace neuroloop
