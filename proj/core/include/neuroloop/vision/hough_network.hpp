#pragma once

#include <map>
#include <string>

#include "neuroloop/engine/network.hpp"
#include "neuroloop/engine/serialize.hpp"
#include "neuroloop/vision/hough_grid.hpp"

namespace neuroloop {

/// Feed-forward line detector, one spiking layer per pipeline stage:
///   cartesian: relays each downsampled event as one spike
///   hough:     leaky coincidence cells over (theta, r); a cell fires once
///              enough collinear events arrive inside its decay window
///   angle:     folds every r bin of a theta column into one angle neuron
///   cleanup:   winner-take-all across angles with lateral inhibition
///   memory:    self-sustaining latch, overwritten by any new cleanup winner
struct VisionNetConfig {
  HoughGridConfig grid{};
  std::int32_t unit_weight = 1;
  std::int32_t coincidence_threshold = 20;  // in unit weights
  double hough_decay_tau = 3.0;
  std::int32_t cleanup_lateral_inhibition = 2;
  std::int32_t memory_excitation = 4;  // cleanup -> matching memory neuron
  std::int32_t memory_inhibition = 3;  // cleanup -> every memory neuron
};

struct VisionNetwork {
  SnnNetwork network;
  std::uint32_t cartesian = 0;
  std::uint32_t hough = 0;
  std::uint32_t angle = 0;
  std::uint32_t cleanup = 0;
  std::uint32_t memory = 0;
};

VisionNetwork build_vision_network(const VisionNetConfig& config);

/// Generator map so serialized vision networks can be reloaded without storing
/// the quarter-million Hough edges explicitly.
std::map<std::string, SynapseGenerator> vision_generators(const VisionNetConfig& config);

}  // namespace neuroloop
