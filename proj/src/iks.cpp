#include "dualks/iks.hpp"

#include <algorithm>
#include <thread>

#include "dualks/error.hpp"

namespace dualks {

const std::vector<NeuronId>& ConceptGraph::lookup(const std::string& name) const {
  auto it = concept_index.find(name);
  if (it == concept_index.end() || it->second.empty())
    throw Error(ErrorCode::UnknownConcept, name);
  return it->second;
}

void ConceptGraph::add_concept(const std::string& name, NeuronId id) {
  if (!net.contains(id)) throw Error(ErrorCode::UnknownNeuron, "concept " + name);
  concept_index[name].push_back(id);
}

std::optional<std::string> ConceptGraph::name_of(NeuronId id) const {
  for (const auto& [name, ids] : concept_index)
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) return name;
  if (net.contains(id) && !net.neuron(id).name.empty()) return net.neuron(id).name;
  return std::nullopt;
}

double CascadeResult::probability(NeuronId id) const {
  auto it = distribution.find(id);
  return it == distribution.end() ? 0.0 : it->second;
}

std::optional<NeuronId> CascadeResult::mode() const {
  std::optional<NeuronId> best;
  std::uint64_t best_count = 0;
  for (const auto& [id, c] : counts) {
    if (c > best_count) {
      best = id;
      best_count = c;
    }
  }
  return best;
}

double CascadeResult::total() const {
  double t = 0.0;
  for (const auto& [id, p] : distribution) t += p;
  return t;
}

std::vector<ExternalSignal> start_clamp(const Network& net, std::span<const NeuronId> start,
                                        int round) {
  std::vector<ExternalSignal> out;
  for (NeuronId id : start) {
    ExternalSignal s;
    s.targets = {id};
    s.weight = clamp_weight(net.neuron(id));
    s.start_round = round;
    s.duration = 1;
    s.label = "clamp";
    out.push_back(std::move(s));
  }
  return out;
}

TrialOutcome classify_trial(const std::vector<std::vector<std::uint8_t>>& firing) {
  TrialOutcome out;
  const int horizon = static_cast<int>(firing.size()) - 1;
  if (horizon < 1) return out;
  const std::size_t n_out = firing.front().size();
  auto alone = [&](int r) -> std::optional<std::size_t> {
    std::optional<std::size_t> who;
    for (std::size_t j = 0; j < n_out; ++j) {
      if (!firing[r][j]) continue;
      if (who) return std::nullopt;
      who = j;
    }
    return who;
  };
  const int window = std::min(kPersistenceRounds, horizon);
  auto last = alone(horizon);
  if (!last) return out;
  for (int r = horizon - window + 1; r <= horizon; ++r)
    if (alone(r) != last) return out;
  int since = horizon;
  while (since - 1 >= 1 && alone(since - 1) == last) --since;
  out.winner = last;
  out.since = since;
  return out;
}

namespace {

struct TrialTally {
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<int>> since;  // per output, stabilization rounds
};

void run_trials(const Network& net, const FiringState& init,
                std::span<const ExternalSignal> signals, std::span<const NeuronId> outputs,
                int horizon, int first, int last, std::uint64_t seed, TrialTally& tally) {
  tally.counts.assign(outputs.size(), 0);
  tally.since.assign(outputs.size(), {});
  std::vector<std::vector<std::uint8_t>> firing(static_cast<std::size_t>(horizon) + 1,
                                                std::vector<std::uint8_t>(outputs.size()));
  FiringState cur, next;
  std::vector<double> scratch;
  for (int t = first; t < last; ++t) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
    cur = init;
    cur.resize(net.size());
    for (std::size_t j = 0; j < outputs.size(); ++j) firing[0][j] = cur.firing[outputs[j].value];
    for (int r = 1; r <= horizon; ++r) {
      step_into(net, cur, signals, rng, next, scratch);
      std::swap(cur, next);
      for (std::size_t j = 0; j < outputs.size(); ++j)
        firing[r][j] = cur.firing[outputs[j].value];
    }
    TrialOutcome o = classify_trial(firing);
    if (o.winner) {
      ++tally.counts[*o.winner];
      tally.since[*o.winner].push_back(o.since);
    }
  }
}

}  // namespace

CascadeResult run_cascade(const Network& net, const FiringState& init,
                          std::span<const ExternalSignal> signals,
                          std::span<const NeuronId> outputs, int horizon, int trials,
                          std::uint64_t seed) {
  if (horizon < 1) throw Error(ErrorCode::Config, "cascade horizon must be >= 1");
  if (trials < 1) throw Error(ErrorCode::Config, "cascade trials must be >= 1");

  // Signals that ended before the start state are irrelevant to every trial.
  std::vector<ExternalSignal> live;
  for (const ExternalSignal& s : signals)
    if (s.start_round + s.duration > init.round) live.push_back(s);

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(1, trials / 500)));
  std::vector<TrialTally> tallies(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    int first = static_cast<int>(static_cast<long long>(trials) * w / workers);
    int last = static_cast<int>(static_cast<long long>(trials) * (w + 1) / workers);
    auto job = [&, w, first, last] {
      run_trials(net, init, live, outputs, horizon, first, last, seed, tallies[w]);
    };
    if (workers == 1) {
      job();
    } else {
      pool.emplace_back(job);
    }
  }
  for (auto& t : pool) t.join();

  CascadeResult result;
  result.trials = trials;
  result.seed = seed;
  std::vector<std::uint64_t> counts(outputs.size(), 0);
  std::vector<std::vector<int>> since(outputs.size());
  for (const TrialTally& t : tallies) {
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      counts[j] += t.counts[j];
      since[j].insert(since[j].end(), t.since[j].begin(), t.since[j].end());
    }
  }
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    result.counts[outputs[j]] += counts[j];
  }
  for (const auto& [id, c] : result.counts)
    result.distribution[id] = static_cast<double>(c) / static_cast<double>(trials);

  if (auto m = result.mode()) {
    result.stabilized = result.probability(*m) >= 0.5;
    auto pos = std::find(outputs.begin(), outputs.end(), *m) - outputs.begin();
    std::vector<int>& rounds = since[static_cast<std::size_t>(pos)];
    std::sort(rounds.begin(), rounds.end());
    result.stabilization_round = rounds[(rounds.size() - 1) / 2];
  }
  return result;
}

std::set<NeuronId> direct_recognize(const ConceptGraph& g, const std::vector<std::string>& inputs) {
  std::vector<NeuronId> reps;
  for (const std::string& name : inputs)
    for (NeuronId id : g.lookup(name)) reps.push_back(id);
  if (reps.empty()) return {};
  auto signals = start_clamp(g.net, reps);
  Rng rng(0);
  FiringState next = step(g.net, FiringState::silent(g.net.size()), signals, rng);
  std::set<NeuronId> out;
  for (NeuronId id : next.firing_ids()) out.insert(id);
  return out;
}

CascadeResult cascade(const ConceptGraph& g, std::span<const NeuronId> start, int horizon,
                      int trials, std::uint64_t seed, Tag output) {
  FiringState init = FiringState::with_firing(g.net.size(), start);
  auto signals = start_clamp(g.net, start);
  auto outputs = g.net.with_tag(output);
  return run_cascade(g.net, init, signals, outputs, horizon, trials, seed);
}

double oja_update(double w, double eta, double x, double y) { return w + eta * y * (x - y * w); }

NeuronId learn_concept(ConceptGraph& g, const std::string& name,
                       std::span<const NeuronId> input_pattern, const LearningConfig& cfg) {
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0))
    throw Error(ErrorCode::Config, "learning rate must lie in (0,1)");
  for (NeuronId in : input_pattern)
    if (!g.net.contains(in)) throw Error(ErrorCode::UnknownNeuron, "input pattern");

  std::optional<NeuronId> winner;
  double best = 0.0;
  for (std::uint32_t i = 0; i < g.net.size(); ++i) {
    NeuronId cand{i};
    if (!g.net.neuron(cand).tags.empty()) continue;
    if (std::find(input_pattern.begin(), input_pattern.end(), cand) != input_pattern.end())
      continue;
    if (cfg.wta_policy == WtaPolicy::FirstUnused) {
      winner = cand;
      break;
    }
    double p = 0.0;
    for (EdgeId e : g.net.incoming(cand)) {
      const Edge& edge = g.net.edge(e);
      if (std::find(input_pattern.begin(), input_pattern.end(), edge.src) != input_pattern.end())
        p += edge.weight;
    }
    if (!winner || p > best) {
      winner = cand;
      best = p;
    }
  }
  if (!winner) throw Error(ErrorCode::NoFreeNeuron, "no untagged neuron left for " + name);

  for (NeuronId in : input_pattern) {
    auto e = g.net.find_edge(in, *winner);
    EdgeId id = e ? *e : g.net.add_edge(in, *winner, 0.0, "learned");
    Edge& edge = g.net.edge(id);
    edge.weight = oja_update(edge.weight, cfg.eta);
  }
  g.net.neuron(*winner).tags.insert(Tag::Concept);
  if (g.net.neuron(*winner).name.empty()) g.net.neuron(*winner).name = name;
  g.add_concept(name, *winner);
  return *winner;
}

double learn_association(ConceptGraph& g, NeuronId a, NeuronId b, int presentations,
                         const LearningConfig& cfg) {
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0))
    throw Error(ErrorCode::Config, "learning rate must lie in (0,1)");
  auto e = g.net.find_edge(a, b);
  EdgeId id = e ? *e : g.net.add_edge(a, b, 0.0, "association");
  Edge& edge = g.net.edge(id);
  for (int i = 0; i < presentations; ++i) edge.weight = oja_update(edge.weight, cfg.eta);
  return edge.weight;
}

ConceptGraph replicate(const ConceptGraph& g, const ReplicationSpec& spec) {
  if (spec.m < 1) throw Error(ErrorCode::Config, "replication factor must be >= 1");
  const int m = spec.m;
  ConceptGraph out;
  out.net.residual() = g.net.residual();
  for (const NeuronSpec& n : g.net.neurons()) {
    for (int j = 0; j < m; ++j) {
      NeuronSpec copy = n;
      if (m > 1 && !copy.name.empty()) copy.name += "#" + std::to_string(j);
      out.net.add_neuron(std::move(copy));
    }
  }
  for (const Edge& e : g.net.edges())
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        out.net.add_edge(replica_of(e.src, a, m), replica_of(e.dst, b, m), e.weight / m, e.label);
  for (const auto& [name, ids] : g.concept_index)
    for (NeuronId id : ids)
      for (int j = 0; j < m; ++j) out.add_concept(name, replica_of(id, j, m));
  return out;
}

}  // namespace dualks
