#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualks/iks.hpp"
#include "dualks/network.hpp"
#include "dualks/simulator.hpp"
#include "dualks/working_memory.hpp"

namespace dualks {

// Constants of the increment circuit.
struct CountParams {
  double h = 3.0;        // number/letter neuron threshold
  double cur = 0.0;      // current-role -> chain neuron weight
  double l = 4.0;        // self-loop weight
  double s = 2.0;        // successor weight
  double s_resid = 1.0;  // residual successor contribution, below s
  double exc = 2.0;      // excitatory pulse
  double inh = -2.0;     // inhibitory pulse

  static CountParams reference() { return {}; }
};

enum class Inequality {
  SelfSustain,          // h <= cur + l
  NoSpontaneousNext,    // h > s + cur
  ExciteIgnitesNext,    // h <= exc + s + cur
  ExciteAloneSilent,    // h > exc + cur
  InhibitKillsCurrent,  // h > cur + l + inh
  ResidualSavesNext,    // h <= cur + l + inh + s_resid
  ResidualBelowSuccessor,
};

std::string_view to_string(Inequality which);
// Position of the constraint in the usual 1..7 numbering (the last one is s' < s).
int ordinal(Inequality which);
std::vector<Inequality> validate_params(const CountParams& p);

// Offsets within one increment cycle. The cycle length is d.
struct PulseSchedule {
  int excite_at = 0;
  int excite_duration = 1;
  int inhibit_at = 1;
  int inhibit_duration = 2;
  int rest = 1;

  int cycle() const { return inhibit_at + inhibit_duration + rest; }
  void validate() const;
};

struct SequenceSpec {
  std::vector<std::string> letters;   // s_1 .. s_k
  std::vector<std::string> concepts;  // IKS concept per letter; empty for no IKS
};

// Memorized-sequence SKS: number chain, letter chain, working-memory roles,
// unary goal inputs, equality detectors, and the IKS copied in behind the
// letter neurons.
struct SequenceNetwork {
  Network net;
  int k = 0;
  CountParams params;
  PulseSchedule schedule;
  std::vector<std::string> letter_symbols;

  // Index p-1 holds position p.
  std::vector<NeuronId> numbers;
  std::vector<NeuronId> letters;
  std::vector<NeuronId> goal_inputs;
  std::vector<NeuronId> relays;
  std::vector<NeuronId> detectors;
  std::vector<NeuronId> concepts;  // iks links, empty without an IKS

  NeuronId current_number;
  NeuronId current_letter;
  NeuronId goal;

  std::vector<NeuronId> decisions;
  std::vector<NeuronId> emotions;
  double handoff_weight = 0.0;

  std::vector<NeuronId> chain() const;
  int letter_index(std::string_view symbol) const;
};

SequenceNetwork build_sequence_network(int k, const CountParams& p, const ConceptGraph& iks,
                                       const SequenceSpec& spec, PulseSchedule schedule = {});

// A running instance of the counting circuit.
class CountingSession {
 public:
  struct Position {
    int number = 1;
    int letter = 1;
  };

  // Fresh network (nothing firing), or one already counting at `at` with the
  // current roles firing.
  CountingSession(const SequenceNetwork& seq, std::uint64_t seed,
                  std::optional<Position> at = std::nullopt);
  CountingSession(const CountingSession&) = delete;
  CountingSession& operator=(const CountingSession&) = delete;

  void start_count(int letter_start = 1);
  void set_goal(int number);

  // Posts one excite/inhibit pulse pair starting now and runs the full cycle.
  void increment();
  // Posts the pulse pair without advancing; returns the first round at which
  // the next pulse pair may start.
  int post_increment();
  void post_excite(int round, int duration);
  void post_inhibit(int round, int duration);

  void advance(int rounds);

  std::vector<int> firing_numbers(int round) const;
  std::vector<int> firing_letters(int round) const;
  std::optional<int> number_position() const;
  std::optional<int> letter_position() const;
  bool detector_fires(int number) const;

  int round() const { return sim_.round(); }
  Simulation& sim() { return sim_; }
  const Simulation& sim() const { return sim_; }
  WorkingMemory& wm() { return wm_; }
  const WorkingMemory& wm() const { return wm_; }
  const Network& network() const { return net_; }
  const SequenceNetwork& layout() const { return seq_; }

 private:
  const SequenceNetwork& seq_;
  Network net_;
  Simulation sim_;
  WorkingMemory wm_;
  bool started_ = false;
};

struct QueryResult {
  int letter_index = 0;
  std::string letter;
  CascadeResult decision;
  std::optional<CascadeResult> emotion;
  int detection_round = 0;
  int latency_rounds = 0;
  int increments = 0;
};

struct QueryOptions {
  int horizon = 32;
  int trials = 10000;
  std::uint64_t seed = 20240901;
  bool emotion = false;
};

QueryResult run_query1(const SequenceNetwork& seq, int g, const QueryOptions& opt,
                       Trace* trace = nullptr, std::unique_ptr<CountingSession>* keep = nullptr);
QueryResult run_query2(const SequenceNetwork& seq, std::string_view letter, int g,
                       const QueryOptions& opt, Trace* trace = nullptr,
                       std::unique_ptr<CountingSession>* keep = nullptr);

// Latency decomposition latency = g * d + t_iks + c for a finished Query 1.
struct LatencyBreakdown {
  int d = 0;
  int t_iks = 0;
  int c = 0;
};
LatencyBreakdown latency_breakdown(const SequenceNetwork& seq, int g, const QueryResult& r);

}  // namespace dualks
