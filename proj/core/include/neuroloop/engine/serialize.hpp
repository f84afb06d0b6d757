#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "neuroloop/engine/network.hpp"

namespace neuroloop {

/// Rebuilds the synapse triplets for a set that was saved by generator name
/// instead of explicit weights. The argument is the generator tag recorded on
/// the set.
using SynapseGenerator = std::function<std::vector<SynapseTriplet>(const std::string& tag)>;

/// Plain-text topology description: populations with their parameters followed
/// by synapse sets either as explicit pre/post/weight triplets or as a
/// generator tag.
void save_network(std::ostream& out, const SnnNetwork& network);
void save_network_file(const std::string& path, const SnnNetwork& network);

SnnNetwork load_network(std::istream& in,
                        const std::map<std::string, SynapseGenerator>& generators = {});
SnnNetwork load_network_file(const std::string& path,
                             const std::map<std::string, SynapseGenerator>& generators = {});

}  // namespace neuroloop
