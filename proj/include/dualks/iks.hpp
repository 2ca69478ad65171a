#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dualks/network.hpp"
#include "dualks/simulator.hpp"

namespace dualks {

// Intuitive knowledge: a concept network plus the name -> representing
// neurons index.
struct ConceptGraph {
  Network net;
  std::map<std::string, std::vector<NeuronId>> concept_index;

  const std::vector<NeuronId>& lookup(const std::string& name) const;
  NeuronId representative(const std::string& name) const { return lookup(name).front(); }
  void add_concept(const std::string& name, NeuronId id);
  std::optional<std::string> name_of(NeuronId id) const;
};

struct CascadeResult {
  std::map<NeuronId, double> distribution;
  std::map<NeuronId, std::uint64_t> counts;
  bool stabilized = false;
  std::optional<int> stabilization_round;
  int trials = 0;
  std::uint64_t seed = 0;

  double probability(NeuronId id) const;
  std::optional<NeuronId> mode() const;
  double total() const;
};

// Number of final horizon rounds in which one output must fire alone to count
// as a persistent decision.
inline constexpr int kPersistenceRounds = 3;

// Start neurons fire at round 0 and are clamped into firing at round 1.
std::vector<ExternalSignal> start_clamp(const Network& net, std::span<const NeuronId> start,
                                        int round = 0);

// The persistent output of one trajectory, if any, and the round from which it
// held alone until the horizon. `firing[r][j]` is output j at relative round r.
struct TrialOutcome {
  std::optional<std::size_t> winner;
  int since = 0;
};
TrialOutcome classify_trial(const std::vector<std::vector<std::uint8_t>>& firing);

// Monte-Carlo cascade from an arbitrary state. Trials use seeds derived from
// (seed, trial index) and results are aggregated as integer counts.
CascadeResult run_cascade(const Network& net, const FiringState& init,
                          std::span<const ExternalSignal> signals,
                          std::span<const NeuronId> outputs, int horizon, int trials,
                          std::uint64_t seed);

std::set<NeuronId> direct_recognize(const ConceptGraph& g, const std::vector<std::string>& inputs);

CascadeResult cascade(const ConceptGraph& g, std::span<const NeuronId> start, int horizon,
                      int trials, std::uint64_t seed, Tag output = Tag::Decision);

enum class WtaPolicy { HighestPotential, FirstUnused };

struct LearningConfig {
  double eta = 0.1;
  WtaPolicy wta_policy = WtaPolicy::HighestPotential;
};

// w <- w + eta * y * (x - y * w)
double oja_update(double w, double eta, double x = 1.0, double y = 1.0);

NeuronId learn_concept(ConceptGraph& g, const std::string& name,
                       std::span<const NeuronId> input_pattern, const LearningConfig& cfg);

double learn_association(ConceptGraph& g, NeuronId a, NeuronId b, int presentations,
                         const LearningConfig& cfg);

struct ReplicationSpec {
  int m = 1;
};

// Replica j of high-level neuron v is NeuronId{v * m + j}.
inline NeuronId replica_of(NeuronId v, int j, int m) {
  return NeuronId{v.value * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(j)};
}

ConceptGraph replicate(const ConceptGraph& g, const ReplicationSpec& spec);

}  // namespace dualks
