#include "neuroloop/engine/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "neuroloop/errors.hpp"

namespace neuroloop {

namespace {

void write_double(std::ostream& out, double value) {
  if (value == kNoDecay) {
    out << "inf";
    return;
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
}

double parse_double(const std::string& token, int line_no) {
  if (token == "inf") return kNoDecay;
  try {
    return std::stod(token);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
}

long parse_long(const std::string& token, int line_no) {
  try {
    return std::stol(token);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad integer '" + token + "'");
  }
}

// key=value tokens after the record keyword and name.
std::map<std::string, std::string> parse_fields(std::istringstream& in, int line_no) {
  std::map<std::string, std::string> fields;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" + token +
                       "'");
    }
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

std::string require(const std::map<std::string, std::string>& fields, const std::string& key,
                    int line_no) {
  const auto it = fields.find(key);
  if (it == fields.end()) {
    throw ParseError("line " + std::to_string(line_no) + ": missing field '" + key + "'");
  }
  return it->second;
}

}  // namespace

void save_network(std::ostream& out, const SnnNetwork& network) {
  out << "network v1\n";
  for (std::uint32_t p = 0; p < network.population_count(); ++p) {
    const auto& cfg = network.population(p);
    out << "population " << cfg.name << " size=" << cfg.size << " threshold=";
    write_double(out, cfg.threshold);
    out << " decay_tau=";
    write_double(out, cfg.decay_tau);
    out << " refractory=" << cfg.refractory << " self_excitation=" << cfg.self_excitation
        << " input_weight=" << cfg.input_weight << " wta=" << (cfg.winner_take_all ? 1 : 0)
        << '\n';
    if (!cfg.thresholds.empty()) {
      out << "thresholds " << cfg.name;
      for (const double t : cfg.thresholds) {
        out << ' ';
        write_double(out, t);
      }
      out << '\n';
    }
  }
  for (std::size_t s = 0; s < network.synapse_set_count(); ++s) {
    const auto& set = network.synapse_set(s);
    out << "synapses " << set.name() << " pre=" << network.population(set.pre_population()).name
        << " post=" << network.population(set.post_population()).name
        << " sign=" << (set.sign() == SynapseSign::excitatory ? "exc" : "inh");
    if (set.plastic()) {
      const auto& rule = *set.plasticity();
      out << " plastic=1 reinforcement=" << network.population(rule.reinforcement_population).name
          << '/' << rule.reinforcement_neuron << " adapt_sign=" << rule.adapt_sign
          << " w_min=" << rule.w_min << " w_max=" << rule.w_max;
    }
    if (!set.generator().empty()) {
      out << " generator=" << set.generator() << '\n';
      continue;
    }
    out << '\n';
    const auto& offsets = set.row_offsets();
    const auto& targets = set.targets();
    const auto& weights = set.raw_weights();
    for (std::uint32_t pre = 0; pre + 1 < offsets.size(); ++pre) {
      for (std::uint32_t k = offsets[pre]; k < offsets[pre + 1]; ++k) {
        out << pre << ' ' << targets[k] << ' ' << weights[k] << '\n';
      }
    }
    out << "end\n";
  }
}

void save_network_file(const std::string& path, const SnnNetwork& network) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  save_network(out, network);
}

SnnNetwork load_network(std::istream& in, const std::map<std::string, SynapseGenerator>& generators) {
  SnnNetwork network;
  std::string line;
  int line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (!header_seen) {
      std::string version;
      ls >> version;
      if (keyword != "network" || version != "v1") {
        throw ParseError("line " + std::to_string(line_no) + ": expected 'network v1' header");
      }
      header_seen = true;
      continue;
    }
    if (keyword == "population") {
      std::string name;
      ls >> name;
      const auto fields = parse_fields(ls, line_no);
      PopulationConfig cfg;
      cfg.name = name;
      cfg.size = static_cast<std::uint32_t>(parse_long(require(fields, "size", line_no), line_no));
      cfg.threshold = parse_double(require(fields, "threshold", line_no), line_no);
      cfg.decay_tau = parse_double(require(fields, "decay_tau", line_no), line_no);
      cfg.refractory =
          static_cast<std::uint32_t>(parse_long(require(fields, "refractory", line_no), line_no));
      cfg.self_excitation =
          static_cast<std::int32_t>(parse_long(require(fields, "self_excitation", line_no), line_no));
      cfg.input_weight =
          static_cast<std::int32_t>(parse_long(require(fields, "input_weight", line_no), line_no));
      cfg.winner_take_all = parse_long(require(fields, "wta", line_no), line_no) != 0;
      network.add_population(std::move(cfg));
    } else if (keyword == "thresholds") {
      std::string name;
      ls >> name;
      const auto pop = network.population_id(name);
      std::vector<double> values;
      std::string token;
      while (ls >> token) values.push_back(parse_double(token, line_no));
      network.set_population_thresholds(pop, std::move(values));
    } else if (keyword == "synapses") {
      std::string name;
      ls >> name;
      const auto fields = parse_fields(ls, line_no);
      const auto pre = network.population_id(require(fields, "pre", line_no));
      const auto post = network.population_id(require(fields, "post", line_no));
      const auto sign_token = require(fields, "sign", line_no);
      if (sign_token != "exc" && sign_token != "inh") {
        throw ParseError("line " + std::to_string(line_no) + ": sign must be exc or inh");
      }
      const auto sign = sign_token == "exc" ? SynapseSign::excitatory : SynapseSign::inhibitory;
      std::optional<PlasticityRule> rule;
      if (fields.count("plastic")) {
        PlasticityRule r;
        const auto source = require(fields, "reinforcement", line_no);
        const auto slash = source.find('/');
        if (slash == std::string::npos) {
          throw ParseError("line " + std::to_string(line_no) + ": reinforcement must be pop/index");
        }
        r.reinforcement_population = network.population_id(source.substr(0, slash));
        r.reinforcement_neuron =
            static_cast<std::uint32_t>(parse_long(source.substr(slash + 1), line_no));
        r.adapt_sign =
            static_cast<std::int32_t>(parse_long(require(fields, "adapt_sign", line_no), line_no));
        r.w_min = static_cast<std::int32_t>(parse_long(require(fields, "w_min", line_no), line_no));
        r.w_max = static_cast<std::int32_t>(parse_long(require(fields, "w_max", line_no), line_no));
        rule = r;
      }
      std::vector<SynapseTriplet> triplets;
      std::string generator;
      if (fields.count("generator")) {
        generator = fields.at("generator");
        const auto it = generators.find(generator.substr(0, generator.find(' ')));
        if (it == generators.end()) {
          throw ParseError("line " + std::to_string(line_no) + ": no generator registered for '" +
                           generator + "'");
        }
        triplets = it->second(generator);
      } else {
        while (std::getline(in, line)) {
          ++line_no;
          if (line == "end") break;
          std::istringstream ts(line);
          long p = 0, q = 0, w = 0;
          if (!(ts >> p >> q >> w)) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'pre post weight'");
          }
          triplets.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(q),
                              static_cast<std::int32_t>(w)});
        }
      }
      network.add_synapses(SynapseSet(name, pre, post, sign, network.population(pre).size,
                                      network.population(post).size, std::move(triplets), rule,
                                      generator));
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown record '" + keyword + "'");
    }
  }
  if (!header_seen) throw ParseError("empty network description");
  return network;
}

SnnNetwork load_network_file(const std::string& path,
                             const std::map<std::string, SynapseGenerator>& generators) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return load_network(in, generators);
}

}  // namespace neuroloop
