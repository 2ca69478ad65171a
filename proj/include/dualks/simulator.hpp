#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dualks/network.hpp"

namespace dualks {

// Seeded 64-bit generator. Uniform draws are built from the top 53 bits so
// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

  static std::uint64_t mix(std::uint64_t x);
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::mt19937_64 engine_;
};

struct ExternalSignal {
  std::vector<NeuronId> targets;
  std::optional<Tag> tag;  // when set, also targets every neuron carrying it
  double weight = 0.0;
  int start_round = 0;
  int duration = 1;
  std::string label;

  bool active_at(int round) const {
    return round >= start_round && round < start_round + duration;
  }
};

// Extra drive that forces any neuron to fire on the next round.
double clamp_weight(const NeuronSpec& spec);

struct FiringState {
  int round = 0;
  std::vector<std::uint8_t> firing;
  std::vector<int> residual;  // rounds of residual left; 0 when none

  static FiringState silent(std::size_t n, int round = 0);
  static FiringState with_firing(std::size_t n, std::span<const NeuronId> on, int round = 0);

  bool fires(NeuronId id) const { return firing.at(id.value) != 0; }
  std::vector<NeuronId> firing_ids() const;
  void resize(std::size_t n);
};

struct Trace {
  std::vector<FiringState> states;
  std::vector<std::vector<int>> signals_applied;  // indices active at each state's round
  std::vector<std::vector<std::string>> events;
  std::uint64_t seed = 0;

  const FiringState& at(int round) const { return states.at(static_cast<std::size_t>(round)); }
  bool fires(NeuronId id, int round) const { return at(round).fires(id); }
};

// Total potential of `n` at `state.round`: firing presynaptic weights, residual
// contributions, and the weight of every signal active at that round.
double potential(const Network& net, const FiringState& state, NeuronId n,
                 std::span<const ExternalSignal> signals = {});

FiringState step(const Network& net, const FiringState& state,
                 std::span<const ExternalSignal> signals, Rng& rng);

// Allocation-free variant used by the trial loops. `scratch` is resized as needed.
void step_into(const Network& net, const FiringState& state,
               std::span<const ExternalSignal> signals, Rng& rng, FiringState& next,
               std::vector<double>& scratch);

Trace run(const Network& net, const FiringState& init, std::span<const ExternalSignal> signals,
          int rounds, std::uint64_t seed);

// Incremental runner: signals and edges may be added between rounds, which is
// how the working memory and the counting controller drive a network.
class Simulation {
 public:
  Simulation(Network& net, FiringState init, std::uint64_t seed);

  int schedule(ExternalSignal signal);
  void step();
  void advance(int rounds);
  void note(std::string event);

  int round() const { return state_.round; }
  const FiringState& state() const { return state_; }
  const Trace& trace() const { return trace_; }
  Network& network() { return net_; }
  const Network& network() const { return net_; }
  const std::vector<ExternalSignal>& signals() const { return signals_; }
  std::uint64_t seed() const { return trace_.seed; }

 private:
  void sync_size();
  std::vector<int> active_indices(int round) const;

  Network& net_;
  FiringState state_;
  Trace trace_;
  Rng rng_;
  std::vector<ExternalSignal> signals_;
  std::vector<double> scratch_;
};

// One row per round: a 0/1 column per neuron, active signal indices and any
// events recorded for the round.
void write_trace_csv(std::ostream& out, const Network& net, const Trace& trace);

}  // namespace dualks
