#include "neuroloop/vision/hough_network.hpp"

namespace neuroloop {

VisionNetwork build_vision_network(const VisionNetConfig& config) {
  const HoughGrid grid(config.grid);
  const std::int32_t wgt = config.unit_weight;
  if (wgt <= 0) throw ConfigError("unit_weight must be positive");

  VisionNetwork net;
  auto& n = net.network;

  net.cartesian = n.add_population({.name = "cartesian",
                                    .size = grid.pixel_count(),
                                    .threshold = 1.0 * wgt,
                                    .decay_tau = 1.0,
                                    .input_weight = wgt});
  net.hough = n.add_population({.name = "hough",
                                .size = grid.cell_count(),
                                .threshold = 1.0 * config.coincidence_threshold * wgt,
                                .decay_tau = config.hough_decay_tau});
  net.angle = n.add_population(
      {.name = "angle", .size = grid.theta_bins(), .threshold = 1.0 * wgt, .decay_tau = 1.0});
  net.cleanup = n.add_population({.name = "cleanup",
                                  .size = grid.theta_bins(),
                                  .threshold = 1.0 * wgt,
                                  .decay_tau = 1.0,
                                  .winner_take_all = true});
  net.memory = n.add_population({.name = "memory",
                                 .size = grid.theta_bins(),
                                 .threshold = 1.0 * wgt,
                                 .decay_tau = 1.0,
                                 .self_excitation = wgt});

  n.add_synapses(SynapseSet("cartesian_to_hough", net.cartesian, net.hough,
                            SynapseSign::excitatory, grid.pixel_count(), grid.cell_count(),
                            grid.connectivity(wgt), std::nullopt, "hough_votes"));

  std::vector<SynapseTriplet> fold;
  fold.reserve(grid.cell_count());
  for (std::uint32_t ti = 0; ti < grid.theta_bins(); ++ti) {
    for (std::uint32_t ri = 0; ri < grid.r_bins(); ++ri) {
      fold.push_back({grid.cell_index(ti, ri), ti, wgt});
    }
  }
  n.add_synapses(SynapseSet("hough_to_angle", net.hough, net.angle, SynapseSign::excitatory,
                            grid.cell_count(), grid.theta_bins(), std::move(fold)));

  std::vector<SynapseTriplet> relay;
  relay.reserve(grid.theta_bins());
  for (std::uint32_t i = 0; i < grid.theta_bins(); ++i) relay.push_back({i, i, wgt});
  n.add_synapses(SynapseSet("angle_to_cleanup", net.angle, net.cleanup, SynapseSign::excitatory,
                            grid.theta_bins(), grid.theta_bins(), relay));

  std::vector<SynapseTriplet> lateral;
  lateral.reserve(static_cast<std::size_t>(grid.theta_bins()) * (grid.theta_bins() - 1));
  for (std::uint32_t i = 0; i < grid.theta_bins(); ++i) {
    for (std::uint32_t j = 0; j < grid.theta_bins(); ++j) {
      if (i != j) lateral.push_back({i, j, config.cleanup_lateral_inhibition * wgt});
    }
  }
  n.add_synapses(SynapseSet("cleanup_lateral", net.cleanup, net.cleanup, SynapseSign::inhibitory,
                            grid.theta_bins(), grid.theta_bins(), std::move(lateral)));

  std::vector<SynapseTriplet> install;
  install.reserve(grid.theta_bins());
  for (std::uint32_t i = 0; i < grid.theta_bins(); ++i) {
    install.push_back({i, i, config.memory_excitation * wgt});
  }
  n.add_synapses(SynapseSet("cleanup_to_memory", net.cleanup, net.memory, SynapseSign::excitatory,
                            grid.theta_bins(), grid.theta_bins(), std::move(install)));

  std::vector<SynapseTriplet> erase;
  erase.reserve(static_cast<std::size_t>(grid.theta_bins()) * grid.theta_bins());
  for (std::uint32_t i = 0; i < grid.theta_bins(); ++i) {
    for (std::uint32_t j = 0; j < grid.theta_bins(); ++j) {
      erase.push_back({i, j, config.memory_inhibition * wgt});
    }
  }
  n.add_synapses(SynapseSet("cleanup_erase_memory", net.cleanup, net.memory,
                            SynapseSign::inhibitory, grid.theta_bins(), grid.theta_bins(),
                            std::move(erase)));

  return net;
}

std::map<std::string, SynapseGenerator> vision_generators(const VisionNetConfig& config) {
  const auto grid_config = config.grid;
  const auto wgt = config.unit_weight;
  return {{"hough_votes", [grid_config, wgt](const std::string&) {
             return HoughGrid(grid_config).connectivity(wgt);
           }}};
}

}  // namespace neuroloop
