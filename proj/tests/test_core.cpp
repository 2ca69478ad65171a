#include <random>
#include <sstream>

#include "doctest.h"
#include "dualks/error.hpp"
#include "dualks/network.hpp"
#include "dualks/simulator.hpp"
#include "oracles.hpp"

using namespace dualks;

namespace {

Network gates(int n, double threshold) {
  Network net;
  for (int i = 0; i < n; ++i) net.add_neuron(NeuronSpec::threshold_gate(threshold));
  return net;
}

ExternalSignal signal_on(std::vector<NeuronId> targets, double w, int start, int duration = 1) {
  ExternalSignal s;
  s.targets = std::move(targets);
  s.weight = w;
  s.start_round = start;
  s.duration = duration;
  return s;
}

}  // namespace

TEST_CASE("add_neuron validates parameters") {
  Network net;
  NeuronId a = net.add_neuron(NeuronSpec::threshold_gate(3.0, {Tag::Number}));
  CHECK(a.value == 0);
  CHECK(net.neuron(a).tags.contains(Tag::Number));
  NeuronSpec bad = NeuronSpec::sigmoid(1.0, 2.0);
  bad.failure_prob = 1.5;
  CHECK_THROWS_AS(net.add_neuron(bad), Error);
  NeuronSpec flat = NeuronSpec::sigmoid(1.0, 0.0);
  CHECK_THROWS_AS(net.add_neuron(flat), Error);
}

TEST_CASE("parallel edges and self-loops are allowed; dangling endpoints are not") {
  Network net = gates(3, 1.0);
  EdgeId e1 = net.add_edge(NeuronId{0}, NeuronId{1}, 2.0);
  EdgeId e2 = net.add_edge(NeuronId{0}, NeuronId{1}, 2.0);
  CHECK(e1 != e2);
  CHECK_NOTHROW(net.add_edge(NeuronId{0}, NeuronId{0}, 4.0, "self-loop"));
  try {
    net.add_edge(NeuronId{0}, NeuronId{7}, 1.0);
    FAIL("expected UnknownNeuron");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownNeuron);
  }
}

TEST_CASE("potential sums firing inputs and active signals") {
  Network net = gates(2, 3.0);
  FiringState s = FiringState::silent(2);
  CHECK(potential(net, s, NeuronId{1}) == 0.0);

  net.add_edge(NeuronId{0}, NeuronId{1}, 2.0);
  net.add_edge(NeuronId{1}, NeuronId{1}, 4.0);
  s.firing = {1, 1};
  CHECK(potential(net, s, NeuronId{1}) == 6.0);

  Network two = gates(2, 3.0);
  two.add_edge(NeuronId{0}, NeuronId{1}, 2.0);
  FiringState t = FiringState::with_firing(2, std::vector<NeuronId>{NeuronId{0}});
  std::vector<ExternalSignal> sig{signal_on({NeuronId{1}}, -2.0, 0)};
  CHECK(potential(two, t, NeuronId{1}, sig) == 0.0);
  CHECK_THROWS_AS(potential(two, t, NeuronId{9}), Error);
}

TEST_CASE("threshold comparison includes the boundary") {
  Network net = gates(2, 3.0);
  Rng rng(1);
  FiringState s = FiringState::silent(2);
  std::vector<ExternalSignal> exact{signal_on({NeuronId{0}}, 3.0, 0)};
  CHECK(step(net, s, exact, rng).fires(NeuronId{0}));
  std::vector<ExternalSignal> below{signal_on({NeuronId{0}}, 2.99, 0)};
  CHECK_FALSE(step(net, s, below, rng).fires(NeuronId{0}));
}

TEST_CASE("sigmoid at its threshold fires half the time") {
  Network net;
  net.add_neuron(NeuronSpec::sigmoid(1.0, 4.0));
  std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, 1.0, 0)};
  Rng rng(42);
  int fired = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    fired += step(net, FiringState::silent(1), sig, rng).fires(NeuronId{0});
  CHECK(std::abs(fired / double(n) - 0.5) <= 0.02);
}

TEST_CASE("sigmoid calibration within three standard errors") {
  for (double pot : {-1.0, 0.0, 0.5, 1.3, 2.0}) {
    Network net;
    net.add_neuron(NeuronSpec::sigmoid(0.5, 2.0));
    std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, pot, 0)};
    Rng rng(7);
    const int n = 50000;
    int fired = 0;
    for (int i = 0; i < n; ++i)
      fired += step(net, FiringState::silent(1), sig, rng).fires(NeuronId{0});
    const double p = oracle::logistic(2.0 * (pot - 0.5));
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(fired / double(n) - p) <= 3 * se);
  }
}

TEST_CASE("failure flips fire a silent neuron at the failure rate") {
  Network net;
  NeuronSpec spec = NeuronSpec::sigmoid(100.0, 1.0);
  spec.failure_prob = 0.2;
  net.add_neuron(spec);
  Rng rng(3);
  int fired = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) fired += step(net, FiringState::silent(1), {}, rng).fires(NeuronId{0});
  CHECK(std::abs(fired / double(n) - 0.2) <= 0.015);
}

TEST_CASE("run: length, clamped chain, seed behaviour") {
  Network net = gates(3, 1.0);
  net.add_edge(NeuronId{0}, NeuronId{1}, 2.0);
  net.add_edge(NeuronId{1}, NeuronId{2}, 2.0);
  std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, 101.0, 0)};
  Trace a = run(net, FiringState::silent(3), sig, 4, 1);
  Trace b = run(net, FiringState::silent(3), sig, 4, 999);
  REQUIRE(a.states.size() == 5);
  CHECK(a.fires(NeuronId{0}, 1));
  CHECK_FALSE(a.fires(NeuronId{2}, 2));
  CHECK(a.fires(NeuronId{2}, 3));
  for (std::size_t r = 0; r < a.states.size(); ++r) CHECK(a.states[r].firing == b.states[r].firing);
  CHECK_THROWS_AS(run(net, FiringState::silent(3), sig, 0, 1), Error);
}

TEST_CASE("stochastic replay is bit-identical for one seed") {
  Network net;
  for (int i = 0; i < 5; ++i) net.add_neuron(NeuronSpec::sigmoid(1.0, 2.0));
  for (int i = 0; i < 5; ++i) net.add_edge(NeuronId{std::uint32_t(i)}, NeuronId{std::uint32_t((i + 1) % 5)}, 1.5);
  FiringState init = FiringState::with_firing(5, std::vector<NeuronId>{NeuronId{0}});
  Trace a = run(net, init, {}, 30, 11);
  Trace b = run(net, init, {}, 30, 11);
  for (std::size_t r = 0; r < a.states.size(); ++r) CHECK(a.states[r].firing == b.states[r].firing);
}

TEST_CASE("tag-targeted signals reach every tagged neuron") {
  Network net;
  net.add_neuron(NeuronSpec::threshold_gate(1.0, {Tag::Decision}));
  net.add_neuron(NeuronSpec::threshold_gate(1.0));
  ExternalSignal s;
  s.tag = Tag::Decision;
  s.weight = 1.0;
  Rng rng(0);
  FiringState next = step(net, FiringState::silent(2), std::vector<ExternalSignal>{s}, rng);
  CHECK(next.fires(NeuronId{0}));
  CHECK_FALSE(next.fires(NeuronId{1}));
}

TEST_CASE("residual contributes fraction * weight for exactly `window` rounds") {
  for (int window : {1, 2, 3}) {
    for (int last_fire : {0, 2}) {
      Network net;
      net.add_neuron(NeuronSpec::threshold_gate(1.0));
      net.add_neuron(NeuronSpec::threshold_gate(1000.0));  // observer, never fires
      net.add_edge(NeuronId{0}, NeuronId{1}, 4.0);
      net.residual() = ResidualConfig{true, 0.5, window};
      // Neuron 0 is held on for rounds 0..last_fire by a clamp.
      std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, 101.0, 0, last_fire)};
      Trace tr = run(net, FiringState::with_firing(2, std::vector<NeuronId>{NeuronId{0}}), sig,
                     last_fire + window + 4, 0);
      for (int r = 0; r < static_cast<int>(tr.states.size()); ++r) {
        double expect = 0.0;
        if (r <= last_fire) {
          expect = 4.0;
        } else if (r >= last_fire + 1 && r <= last_fire + window) {
          expect = 2.0;
        }
        // A potential computed at round r decides firing at r + 1, so the
        // residual reaches firing decisions at last_fire+2 .. last_fire+1+window.
        CHECK(potential(net, tr.at(r), NeuronId{1}) == expect);
      }
    }
  }
}

TEST_CASE("adding a positive edge from a firing neuron never lowers a potential") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> w(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Network net = gates(5, 1.0);
    for (int e = 0; e < 8; ++e)
      net.add_edge(NeuronId{static_cast<std::uint32_t>(gen() % 5)}, NeuronId{static_cast<std::uint32_t>(gen() % 5)}, w(gen));
    FiringState s = FiringState::silent(5);
    for (auto& f : s.firing) f = gen() % 2;
    std::vector<double> before;
    for (std::uint32_t v = 0; v < 5; ++v) before.push_back(potential(net, s, NeuronId{v}));
    std::uint32_t src = static_cast<std::uint32_t>(gen() % 5);
    s.firing[src] = 1;
    std::vector<double> base;
    for (std::uint32_t v = 0; v < 5; ++v) base.push_back(potential(net, s, NeuronId{v}));
    net.add_edge(NeuronId{src}, NeuronId{static_cast<std::uint32_t>(gen() % 5)}, std::abs(w(gen)));
    for (std::uint32_t v = 0; v < 5; ++v) CHECK(potential(net, s, NeuronId{v}) >= base[v]);
  }
}

TEST_CASE("run matches the naive oracle on random deterministic nets with residuals") {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 6);
    Network net;
    for (int i = 0; i < n; ++i)
      net.add_neuron(NeuronSpec::threshold_gate(static_cast<double>(gen() % 5) - 1.0));
    const int edges = static_cast<int>(gen() % 13);
    for (int e = 0; e < edges; ++e)
      net.add_edge(NeuronId{static_cast<std::uint32_t>(gen() % n)}, NeuronId{static_cast<std::uint32_t>(gen() % n)}, static_cast<double>(gen() % 9) - 4.0);
    net.residual() = ResidualConfig{true, 0.5, 1 + static_cast<int>(gen() % 3)};
    FiringState init = FiringState::silent(n);
    for (auto& f : init.firing) f = gen() % 2;
    std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, 2.0, 1, 2)};
    Trace tr = run(net, init, sig, 6, 0);
    auto ref = oracle::naive_run(net, init.firing, 6, sig);
    for (int r = 0; r <= 6; ++r) CHECK(tr.at(r).firing == ref[r]);
  }
}

TEST_CASE("trace CSV has a header, one row per round and signal indices") {
  Network net;
  net.add_neuron(NeuronSpec::threshold_gate(1.0, {}, "a"));
  net.add_neuron(NeuronSpec::threshold_gate(1.0));
  std::vector<ExternalSignal> sig{signal_on({NeuronId{0}}, 5.0, 0)};
  Trace tr = run(net, FiringState::silent(2), sig, 2, 0);
  std::ostringstream out;
  write_trace_csv(out, net, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "round,a,n1,signals,event");
  std::getline(in, line);
  CHECK(line == "0,0,0,0,");
  std::getline(in, line);
  CHECK(line == "1,1,0,,");
}

TEST_CASE("Simulation notes events and grows with the network") {
  Network net = gates(1, 1.0);
  Simulation sim(net, FiringState::silent(1), 0);
  sim.note("hello");
  sim.schedule(signal_on({NeuronId{0}}, 2.0, 0));
  sim.step();
  CHECK(sim.state().fires(NeuronId{0}));
  net.add_neuron(NeuronSpec::threshold_gate(1.0));
  sim.step();
  CHECK(sim.state().firing.size() == 2);
  CHECK(sim.trace().events[0].at(0) == "hello");
}
