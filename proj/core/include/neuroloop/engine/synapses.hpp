#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace neuroloop {

enum class SynapseSign { excitatory, inhibitory };

/// Uniform reinforcement-gated plasticity. When the reinforcement neuron fires
/// at step t, every weight in the set moves by adapt_sign (clamped to
/// [w_min, w_max]) and the new weights take effect at step t+1.
struct PlasticityRule {
  std::uint32_t reinforcement_population = 0;
  std::uint32_t reinforcement_neuron = 0;
  std::int32_t adapt_sign = +1;  // +1 or -1
  std::int32_t w_min = 0;
  std::int32_t w_max = 255;
};

struct SynapseTriplet {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  std::int32_t weight = 0;
};

/// One projection between two populations, stored row-compressed over the
/// presynaptic index. Weights are non-negative magnitudes; the sign decides
/// whether a spike adds +w or -w to the target membrane.
class SynapseSet {
 public:
  SynapseSet(std::string name, std::uint32_t pre_population, std::uint32_t post_population,
             SynapseSign sign, std::uint32_t pre_size, std::uint32_t post_size,
             std::vector<SynapseTriplet> triplets,
             std::optional<PlasticityRule> plasticity = std::nullopt,
             std::string generator = {});

  const std::string& name() const { return name_; }
  std::uint32_t pre_population() const { return pre_population_; }
  std::uint32_t post_population() const { return post_population_; }
  SynapseSign sign() const { return sign_; }
  bool plastic() const { return plasticity_.has_value(); }
  const std::optional<PlasticityRule>& plasticity() const { return plasticity_; }
  const std::string& generator() const { return generator_; }

  std::size_t edge_count() const { return targets_.size(); }
  std::span<const std::uint32_t> row_targets(std::uint32_t pre) const;
  std::span<const std::int32_t> row_weights(std::uint32_t pre) const;
  std::span<const std::int32_t> weights() const { return weights_; }

  /// Signed contribution factor: +1 excitatory, -1 inhibitory.
  std::int32_t polarity() const { return sign_ == SynapseSign::excitatory ? 1 : -1; }

  /// Moves every weight by the plasticity sign, clamped. Returns the applied
  /// delta (0 when all weights sat on a bound).
  std::int32_t adapt();

  /// Iteration support for the engine hot path.
  const std::vector<std::uint32_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::uint32_t>& targets() const { return targets_; }
  const std::vector<std::int32_t>& raw_weights() const { return weights_; }

 private:
  std::string name_;
  std::uint32_t pre_population_;
  std::uint32_t post_population_;
  SynapseSign sign_;
  std::vector<std::uint32_t> row_offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<std::int32_t> weights_;
  std::optional<PlasticityRule> plasticity_;
  std::string generator_;
};

}  // namespace neuroloop
