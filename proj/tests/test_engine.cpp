#include <sstream>

#include "doctest.h"
#include "neuroloop/engine/engine.hpp"
#include "neuroloop/engine/serialize.hpp"
#include "neuroloop/errors.hpp"

using namespace neuroloop;

namespace {

SnnNetwork two_layer_net() {
  SnnNetwork net;
  PopulationConfig in;
  in.name = "in";
  in.size = 4;
  in.threshold = 0.5;
  net.add_population(in);
  PopulationConfig out;
  out.name = "out";
  out.size = 4;
  out.threshold = 0.5;
  net.add_population(out);
  std::vector<SynapseTriplet> t;
  for (std::uint32_t i = 0; i < 4; ++i) t.push_back({i, i, 1});
  net.add_synapses(SynapseSet("fwd", 0, 1, SynapseSign::excitatory, 4, 4, t));
  return net;
}

}  // namespace

TEST_CASE("injected spikes take one timestep, layer hops one more") {
  Engine engine({}, two_layer_net());
  SpikeBatch input;
  input.timestep = 0;
  input.spikes.push_back({0, 2});

  const SpikeBatch& s0 = engine.step(input);
  CHECK(s0.timestep == 0);
  CHECK(s0.empty());

  const SpikeBatch& s1 = engine.step();
  CHECK(s1.timestep == 1);
  REQUIRE(s1.spikes.size() == 1);
  CHECK(s1.spikes[0] == Spike{0, 2});

  const SpikeBatch& s2 = engine.step();
  REQUIRE(s2.spikes.size() == 1);
  CHECK(s2.spikes[0] == Spike{1, 2});

  CHECK(engine.step().empty());
}

TEST_CASE("input batch must carry the next timestep") {
  Engine engine({}, two_layer_net());
  SpikeBatch input;
  input.timestep = 3;
  CHECK_THROWS_AS(engine.step(input), ScheduleError);
}

TEST_CASE("out-of-range input spikes are rejected") {
  Engine engine({}, two_layer_net());
  SpikeBatch input;
  input.timestep = 0;
  input.spikes.push_back({0, 99});
  CHECK_THROWS_AS(engine.step(input), InputError);

  SpikeBatch bad_pop;
  bad_pop.timestep = 0;
  bad_pop.spikes.push_back({7, 0});
  CHECK_THROWS_AS(engine.step(bad_pop), InputError);
}

TEST_CASE("membrane decays exponentially between inputs") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "n";
  p.size = 1;
  p.threshold = 10.0;
  p.decay_tau = 3.0;
  net.add_population(p);
  Engine engine({}, net);

  SpikeBatch input;
  input.timestep = 0;
  input.spikes.push_back({0, 0});
  engine.step(input);
  engine.step();
  CHECK(engine.membrane(0, 0) == doctest::Approx(1.0));
  engine.step();
  CHECK(engine.membrane(0, 0) == doctest::Approx(std::exp(-1.0 / 3.0)));
  engine.step();
  CHECK(engine.membrane(0, 0) == doctest::Approx(std::exp(-2.0 / 3.0)));
}

TEST_CASE("decay factor handles the no-leak sentinel and rejects bad tau") {
  CHECK(decay_factor(kNoDecay) == 1.0);
  CHECK(decay_factor(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(decay_factor(0.5), ConfigError);
}

TEST_CASE("repeated input entries accumulate input_weight each") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "n";
  p.size = 1;
  p.threshold = 100.0;
  p.decay_tau = kNoDecay;
  p.input_weight = 2;
  net.add_population(p);
  Engine engine({}, net);

  SpikeBatch input;
  input.timestep = 0;
  input.spikes = {{0, 0}, {0, 0}, {0, 0}};
  engine.step(input);
  engine.step();
  CHECK(engine.membrane(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("winner-take-all fires the highest membrane, lowest index on ties") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "wta";
  p.size = 3;
  p.threshold = 1.0;
  p.decay_tau = kNoDecay;
  p.winner_take_all = true;
  net.add_population(p);
  Engine engine({}, net);

  SpikeBatch input;
  input.timestep = 0;
  input.spikes = {{0, 0}, {0, 2}, {0, 2}};
  const SpikeBatch& out = *[&] { engine.step(input); return &engine.step(); }();
  REQUIRE(out.spikes.size() == 1);
  CHECK(out.spikes[0] == Spike{0, 2});
  // The loser keeps its charge and wins the next step.
  const SpikeBatch& next = engine.step();
  REQUIRE(next.spikes.size() == 1);
  CHECK(next.spikes[0] == Spike{0, 0});

  SpikeBatch tie;
  tie.timestep = engine.next_timestep();
  tie.spikes = {{0, 1}, {0, 2}};
  engine.step(tie);
  const SpikeBatch& tied = engine.step();
  REQUIRE(tied.spikes.size() == 1);
  CHECK(tied.spikes[0] == Spike{0, 1});
}

TEST_CASE("refractory period suppresses spikes") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "r";
  p.size = 1;
  p.threshold = 1.0;
  p.decay_tau = kNoDecay;
  p.refractory = 2;
  net.add_population(p);
  Engine engine({}, net);

  std::vector<Timestep> fired;
  for (int k = 0; k < 10; ++k) {
    SpikeBatch input;
    input.timestep = engine.next_timestep();
    input.spikes.push_back({0, 0});
    const SpikeBatch& out = engine.step(input);
    if (!out.empty()) fired.push_back(out.timestep);
  }
  // First charge lands at step 1; each spike blocks the following two steps.
  CHECK(fired == std::vector<Timestep>{1, 4, 7});
}

TEST_CASE("self-excitation arrives one step after firing") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "latch";
  p.size = 1;
  p.threshold = 1.0;
  p.decay_tau = kNoDecay;
  p.self_excitation = 1;
  net.add_population(p);
  Engine engine({}, net);

  SpikeBatch input;
  input.timestep = 0;
  input.spikes.push_back({0, 0});
  engine.step(input);
  for (int k = 0; k < 5; ++k) {
    const SpikeBatch& out = engine.step();
    REQUIRE(out.spikes.size() == 1);  // keeps itself alive indefinitely
  }
}

TEST_CASE("reinforcement spike shifts every weight in a plastic set, clamped") {
  SnnNetwork net;
  PopulationConfig r;
  r.name = "r";
  r.size = 1;
  r.threshold = 1.0;
  net.add_population(r);
  PopulationConfig a;
  a.name = "a";
  a.size = 2;
  a.threshold = 1.0;
  net.add_population(a);
  PopulationConfig b = a;
  b.name = "b";
  net.add_population(b);

  PlasticityRule rule;
  rule.reinforcement_population = 0;
  rule.reinforcement_neuron = 0;
  rule.adapt_sign = +1;
  rule.w_min = 0;
  rule.w_max = 12;
  net.add_synapses(SynapseSet("plastic", 1, 2, SynapseSign::excitatory, 2, 2,
                              {{0, 0, 11}, {1, 1, 5}}, rule));

  SpikeBatch fired;
  fired.spikes.push_back({0, 0});
  auto events = apply_plasticity(net, fired);
  REQUIRE(events.size() == 1);
  CHECK(events[0].delta == 1);
  CHECK(net.synapse_set(0).raw_weights() == std::vector<std::int32_t>{12, 6});

  apply_plasticity(net, fired);  // 11->12 hit the bound, 5->7 keeps moving
  CHECK(net.synapse_set(0).raw_weights() == std::vector<std::int32_t>{12, 7});

  SpikeBatch other;
  other.spikes.push_back({1, 0});
  CHECK(apply_plasticity(net, other).empty());
}

TEST_CASE("network text serialization round-trips") {
  SnnNetwork net = two_layer_net();
  net.add_synapses(SynapseSet("gen", 1, 0, SynapseSign::inhibitory, 4, 4,
                              {{0, 1, 2}, {2, 3, 4}}, std::nullopt, "crossbar"));

  std::stringstream first;
  save_network(first, net);

  std::map<std::string, SynapseGenerator> generators{
      {"crossbar", [](const std::string&) {
         return std::vector<SynapseTriplet>{{0, 1, 2}, {2, 3, 4}};
       }}};
  SnnNetwork loaded = load_network(first, generators);

  std::stringstream second;
  save_network(second, loaded);
  CHECK(first.str() == second.str());

  CHECK(loaded.population_count() == 2);
  CHECK(loaded.population_id("out") == 1);
  CHECK(loaded.synapse_set(1).sign() == SynapseSign::inhibitory);
  CHECK(loaded.synapse_set(1).generator() == "crossbar");
  CHECK(loaded.synapse_set(1).edge_count() == 2);

  // A generator-tagged set cannot be restored without its generator.
  first.clear();
  first.seekg(0);
  CHECK_THROWS_AS(load_network(first), ParseError);
}

TEST_CASE("engine output batches are sorted and deduplicated per neuron") {
  SnnNetwork net;
  PopulationConfig p;
  p.name = "n";
  p.size = 6;
  p.threshold = 0.5;
  net.add_population(p);
  Engine engine({}, net);

  SpikeBatch input;
  input.timestep = 0;
  input.spikes = {{0, 5}, {0, 1}, {0, 3}, {0, 1}};
  engine.step(input);
  const SpikeBatch& out = engine.step();
  REQUIRE(out.spikes.size() == 3);
  CHECK(out.spikes[0] == Spike{0, 1});
  CHECK(out.spikes[1] == Spike{0, 3});
  CHECK(out.spikes[2] == Spike{0, 5});
}
