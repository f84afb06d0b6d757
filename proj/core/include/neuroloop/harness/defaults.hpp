#pragma once

#include "neuroloop/control/adaptation.hpp"
#include "neuroloop/control/decode.hpp"
#include "neuroloop/control/snn_pd.hpp"
#include "neuroloop/events/synth.hpp"
#include "neuroloop/harness/config.hpp"
#include "neuroloop/plant/plant.hpp"
#include "neuroloop/vision/cpu_estimator.hpp"
#include "neuroloop/vision/hough_network.hpp"

namespace neuroloop {

/// Builders translating the flat config into module configurations. The
/// config carries every tunable; these are the single place key names are
/// interpreted.
HoughGridConfig grid_from(const Config& config);
VisionNetConfig vision_net_from(const Config& config);
CpuEstimatorConfig cpu_estimator_from(const Config& config);
SyntheticSceneConfig scene_from(const Config& config, std::uint64_t seed);
PlantConfig plant_from(const Config& config, std::uint64_t seed);
AdaptationConfig adaptation_from(const Config& config);
OutputDecode output_decode_from(const Config& config);
ThrustMap thrust_map_from(const Config& config);

/// `path` selects the gain pair: "encoder", "vision_snn" or "vision_cpu".
PdGains gains_from(const Config& config, const std::string& path);

SnnPdConfig snn_pd_from(const Config& config, const PdGains& gains, bool adaptation);

}  // namespace neuroloop
