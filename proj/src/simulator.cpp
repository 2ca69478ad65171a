#include "dualks/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dualks/error.hpp"

namespace dualks {

std::uint64_t Rng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double clamp_weight(const NeuronSpec& spec) { return std::max(spec.threshold, 0.0) + 100.0; }

FiringState FiringState::silent(std::size_t n, int round) {
  FiringState s;
  s.round = round;
  s.firing.assign(n, 0);
  s.residual.assign(n, 0);
  return s;
}

FiringState FiringState::with_firing(std::size_t n, std::span<const NeuronId> on, int round) {
  FiringState s = silent(n, round);
  for (NeuronId id : on) s.firing.at(id.value) = 1;
  return s;
}

std::vector<NeuronId> FiringState::firing_ids() const {
  std::vector<NeuronId> out;
  for (std::uint32_t i = 0; i < firing.size(); ++i)
    if (firing[i]) out.push_back(NeuronId{i});
  return out;
}

void FiringState::resize(std::size_t n) {
  firing.resize(n, 0);
  residual.resize(n, 0);
}

namespace {

// Potentials built from split weights (w/m summed m times) can land a rounding
// error below an exact threshold.
constexpr double kThresholdSlack = 1e-9;

void add_signal_drive(const Network& net, std::span<const ExternalSignal> signals, int round,
                      std::vector<double>& pot) {
  for (const ExternalSignal& sig : signals) {
    if (!sig.active_at(round)) continue;
    for (NeuronId t : sig.targets) {
      if (!net.contains(t)) throw Error(ErrorCode::UnknownNeuron, "signal target");
      pot[t.value] += sig.weight;
    }
    if (sig.tag) {
      const auto& ns = net.neurons();
      for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i].tags.contains(*sig.tag)) pot[i] += sig.weight;
    }
  }
}

}  // namespace

double potential(const Network& net, const FiringState& state, NeuronId n,
                 std::span<const ExternalSignal> signals) {
  if (!net.contains(n)) throw Error(ErrorCode::UnknownNeuron, "neuron " + std::to_string(n.value));
  const ResidualConfig& rc = net.residual();
  double total = 0.0;
  for (EdgeId e : net.incoming(n)) {
    const Edge& edge = net.edge(e);
    if (state.firing[edge.src.value]) {
      total += edge.weight;
    } else if (rc.enabled && state.residual[edge.src.value] > 0) {
      total += rc.magnitude_fraction * edge.weight;
    }
  }
  for (const ExternalSignal& sig : signals) {
    if (!sig.active_at(state.round)) continue;
    for (NeuronId t : sig.targets)
      if (t == n) total += sig.weight;
    if (sig.tag && net.neuron(n).tags.contains(*sig.tag)) total += sig.weight;
  }
  return total;
}

void step_into(const Network& net, const FiringState& state,
               std::span<const ExternalSignal> signals, Rng& rng, FiringState& next,
               std::vector<double>& pot) {
  const std::size_t n = net.size();
  const ResidualConfig& rc = net.residual();
  pot.assign(n, 0.0);

  const auto& edges = net.edges();
  for (std::uint32_t i = 0; i < n; ++i) {
    double scale;
    if (state.firing[i]) {
      scale = 1.0;
    } else if (rc.enabled && state.residual[i] > 0) {
      scale = rc.magnitude_fraction;
    } else {
      continue;
    }
    for (EdgeId e : net.outgoing(NeuronId{i})) {
      const Edge& edge = edges[e.value];
      pot[edge.dst.value] += scale == 1.0 ? edge.weight : scale * edge.weight;
    }
  }
  add_signal_drive(net, signals, state.round, pot);

  next.round = state.round + 1;
  next.firing.resize(n);
  next.residual.resize(n);
  const auto& specs = net.neurons();
  for (std::size_t i = 0; i < n; ++i) {
    const NeuronSpec& spec = specs[i];
    bool fire;
    if (spec.kind == NeuronKind::Threshold) {
      fire = pot[i] >= spec.threshold - kThresholdSlack;
    } else {
      double p = 1.0 / (1.0 + std::exp(-spec.steepness * (pot[i] - spec.threshold)));
      fire = rng.uniform() < p;
    }
    if (spec.failure_prob > 0.0 && rng.uniform() < spec.failure_prob) fire = !fire;

    next.firing[i] = fire ? 1 : 0;
    if (fire) {
      next.residual[i] = 0;
    } else if (state.firing[i]) {
      next.residual[i] = rc.enabled ? rc.window : 0;
    } else {
      next.residual[i] = std::max(0, state.residual[i] - 1);
    }
  }
}

FiringState step(const Network& net, const FiringState& state,
                 std::span<const ExternalSignal> signals, Rng& rng) {
  FiringState next;
  std::vector<double> scratch;
  step_into(net, state, signals, rng, next, scratch);
  return next;
}

Trace run(const Network& net, const FiringState& init, std::span<const ExternalSignal> signals,
          int rounds, std::uint64_t seed) {
  if (rounds < 1) throw Error(ErrorCode::Config, "run needs at least one round");
  Trace trace;
  trace.seed = seed;
  trace.states.reserve(static_cast<std::size_t>(rounds) + 1);
  Rng rng(seed);
  std::vector<double> scratch;
  FiringState cur = init;
  cur.resize(net.size());
  auto active = [&](int round) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < signals.size(); ++i)
      if (signals[i].active_at(round)) idx.push_back(static_cast<int>(i));
    return idx;
  };
  trace.states.push_back(cur);
  trace.signals_applied.push_back(active(cur.round));
  trace.events.emplace_back();
  for (int r = 0; r < rounds; ++r) {
    FiringState next;
    step_into(net, cur, signals, rng, next, scratch);
    cur = std::move(next);
    trace.states.push_back(cur);
    trace.signals_applied.push_back(active(cur.round));
    trace.events.emplace_back();
  }
  return trace;
}

Simulation::Simulation(Network& net, FiringState init, std::uint64_t seed)
    : net_(net), state_(std::move(init)), rng_(seed) {
  state_.resize(net_.size());
  trace_.seed = seed;
  trace_.states.push_back(state_);
  trace_.signals_applied.emplace_back();
  trace_.events.emplace_back();
}

void Simulation::sync_size() {
  if (state_.firing.size() != net_.size()) state_.resize(net_.size());
}

std::vector<int> Simulation::active_indices(int round) const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < signals_.size(); ++i)
    if (signals_[i].active_at(round)) idx.push_back(static_cast<int>(i));
  return idx;
}

int Simulation::schedule(ExternalSignal signal) {
  signals_.push_back(std::move(signal));
  trace_.signals_applied.back() = active_indices(state_.round);
  return static_cast<int>(signals_.size()) - 1;
}

void Simulation::step() {
  sync_size();
  FiringState next;
  step_into(net_, state_, signals_, rng_, next, scratch_);
  state_ = std::move(next);
  trace_.states.push_back(state_);
  trace_.signals_applied.push_back(active_indices(state_.round));
  trace_.events.emplace_back();
}

void Simulation::advance(int rounds) {
  for (int i = 0; i < rounds; ++i) step();
}

void Simulation::note(std::string event) { trace_.events.back().push_back(std::move(event)); }

void write_trace_csv(std::ostream& out, const Network& net, const Trace& trace) {
  out << "round";
  for (std::uint32_t i = 0; i < net.size(); ++i) {
    const std::string& name = net.neuron(NeuronId{i}).name;
    out << ',' << (name.empty() ? "n" + std::to_string(i) : name);
  }
  out << ",signals,event\n";
  for (std::size_t r = 0; r < trace.states.size(); ++r) {
    const FiringState& s = trace.states[r];
    out << s.round;
    for (std::size_t i = 0; i < net.size(); ++i)
      out << ',' << (i < s.firing.size() && s.firing[i] ? 1 : 0);
    out << ',';
    const auto& sig = trace.signals_applied[r];
    for (std::size_t j = 0; j < sig.size(); ++j) out << (j ? ";" : "") << sig[j];
    out << ',';
    const auto& ev = trace.events[r];
    for (std::size_t j = 0; j < ev.size(); ++j) out << (j ? ";" : "") << ev[j];
    out << '\n';
  }
}

}  // namespace dualks
