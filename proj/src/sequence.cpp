#include "dualks/sequence.hpp"

#include <algorithm>

#include "dualks/error.hpp"

namespace dualks {

namespace {

constexpr const char* kCurrentNumber = "current-number";
constexpr const char* kCurrentLetter = "current-letter";
constexpr const char* kGoal = "goal";

// Bound on controller rounds per increment before a run is declared stuck.
constexpr int kStuckRounds = 64;

std::string join(const std::vector<Inequality>& v) {
  std::string out;
  for (Inequality i : v) {
    if (!out.empty()) out += ", ";
    out += to_string(i);
  }
  return out;
}

int first_odd_at_least(int t) { return t % 2 == 0 ? t + 1 : t; }

FiringState initial_state(const SequenceNetwork& seq,
                          std::optional<CountingSession::Position> at) {
  if (!at) return FiringState::silent(seq.net.size());
  if (at->number < 1 || at->number > seq.k || at->letter < 1 || at->letter > seq.k)
    throw Error(ErrorCode::Config, "start position outside 1..k");
  std::vector<NeuronId> on = {seq.current_number, seq.current_letter,
                              seq.numbers[at->number - 1], seq.letters[at->letter - 1]};
  return FiringState::with_firing(seq.net.size(), on);
}

std::optional<int> unique_position(const std::vector<int>& firing) {
  if (firing.size() != 1) return std::nullopt;
  return firing.front();
}

}  // namespace

std::string_view to_string(Inequality which) {
  switch (which) {
    case Inequality::SelfSustain: return "I1";
    case Inequality::NoSpontaneousNext: return "I2";
    case Inequality::ExciteIgnitesNext: return "I3";
    case Inequality::ExciteAloneSilent: return "I4";
    case Inequality::InhibitKillsCurrent: return "I5";
    case Inequality::ResidualSavesNext: return "I6";
    case Inequality::ResidualBelowSuccessor: return "s_resid<s";
  }
  return "?";
}

int ordinal(Inequality which) { return static_cast<int>(which) + 1; }

std::vector<Inequality> validate_params(const CountParams& p) {
  std::vector<Inequality> bad;
  if (!(p.h <= p.cur + p.l)) bad.push_back(Inequality::SelfSustain);
  if (!(p.h > p.s + p.cur)) bad.push_back(Inequality::NoSpontaneousNext);
  if (!(p.h <= p.exc + p.s + p.cur)) bad.push_back(Inequality::ExciteIgnitesNext);
  if (!(p.h > p.exc + p.cur)) bad.push_back(Inequality::ExciteAloneSilent);
  if (!(p.h > p.cur + p.l + p.inh)) bad.push_back(Inequality::InhibitKillsCurrent);
  if (!(p.h <= p.cur + p.l + p.inh + p.s_resid)) bad.push_back(Inequality::ResidualSavesNext);
  if (!(p.s_resid < p.s)) bad.push_back(Inequality::ResidualBelowSuccessor);
  return bad;
}

void PulseSchedule::validate() const {
  if (excite_at < 0 || excite_duration < 1 || inhibit_duration < 1 || rest < 0)
    throw Error(ErrorCode::Config, "pulse schedule offsets and durations must be positive");
  if (inhibit_at < excite_at + excite_duration)
    throw Error(ErrorCode::Config, "inhibition must follow excitation");
}

std::vector<NeuronId> SequenceNetwork::chain() const {
  std::vector<NeuronId> out = numbers;
  out.insert(out.end(), letters.begin(), letters.end());
  return out;
}

int SequenceNetwork::letter_index(std::string_view symbol) const {
  for (std::size_t i = 0; i < letter_symbols.size(); ++i)
    if (letter_symbols[i] == symbol) return static_cast<int>(i) + 1;
  throw Error(ErrorCode::UnknownLetter, std::string(symbol));
}

SequenceNetwork build_sequence_network(int k, const CountParams& p, const ConceptGraph& iks,
                                       const SequenceSpec& spec, PulseSchedule schedule) {
  if (auto bad = validate_params(p); !bad.empty())
    throw Error(ErrorCode::InvalidParams, "violated: " + join(bad));
  if (k < 1) throw Error(ErrorCode::Config, "sequence length must be >= 1");
  schedule.validate();
  if (!spec.letters.empty() && static_cast<int>(spec.letters.size()) != k)
    throw Error(ErrorCode::Config, "letter list length differs from k");
  if (!spec.concepts.empty() && static_cast<int>(spec.concepts.size()) != k)
    throw Error(ErrorCode::Config, "concept list length differs from k");

  SequenceNetwork seq;
  seq.k = k;
  seq.params = p;
  seq.schedule = schedule;
  Network& net = seq.net;
  net.residual() = ResidualConfig{true, p.s_resid / p.s, schedule.inhibit_duration};

  for (int i = 1; i <= k; ++i) {
    seq.letter_symbols.push_back(spec.letters.empty() ? "s" + std::to_string(i)
                                                      : spec.letters[i - 1]);
  }
  for (int i = 1; i <= k; ++i)
    seq.numbers.push_back(
        net.add_neuron(NeuronSpec::threshold_gate(p.h, {Tag::Number}, "n" + std::to_string(i))));
  for (int i = 1; i <= k; ++i)
    seq.letters.push_back(net.add_neuron(NeuronSpec::threshold_gate(
        p.h, {Tag::Letter, Tag::Symbol}, seq.letter_symbols[i - 1])));

  seq.current_number = WorkingMemory::make_role_neuron(net, kCurrentNumber);
  seq.current_letter = WorkingMemory::make_role_neuron(net, kCurrentLetter);
  seq.goal = WorkingMemory::make_role_neuron(net, kGoal);
  // The current roles keep themselves going once started.
  net.add_edge(seq.current_number, seq.current_number, 1.0, "self-loop");
  net.add_edge(seq.current_letter, seq.current_letter, 1.0, "self-loop");

  auto wire_chain = [&](const std::vector<NeuronId>& chain, NeuronId role) {
    for (int i = 0; i < k; ++i) {
      net.add_edge(chain[i], chain[i], p.l, "self-loop");
      net.add_edge(role, chain[i], p.cur, "current");
      if (i + 1 < k) net.add_edge(chain[i], chain[i + 1], p.s, "successor");
    }
  };
  wire_chain(seq.numbers, seq.current_number);
  wire_chain(seq.letters, seq.current_letter);

  // Equality detector j: rep(j) now, rep(j) one round ago (relay), goal input j now.
  for (int i = 1; i <= k; ++i) {
    const std::string idx = std::to_string(i);
    NeuronId u = net.add_neuron(
        NeuronSpec::threshold_gate(1.0, {Tag::Input, Tag::Number}, "goal-input-" + idx));
    NeuronId r = net.add_neuron(NeuronSpec::threshold_gate(1.0, {}, "relay-" + idx));
    NeuronId d = net.add_neuron(NeuronSpec::threshold_gate(3.0, {}, "eq-" + idx));
    net.add_edge(seq.numbers[i - 1], r, 1.0, "relay");
    net.add_edge(seq.numbers[i - 1], d, 1.0, "detect");
    net.add_edge(r, d, 1.0, "detect");
    net.add_edge(u, d, 1.0, "detect");
    seq.goal_inputs.push_back(u);
    seq.relays.push_back(r);
    seq.detectors.push_back(d);
  }

  if (spec.concepts.empty()) return seq;

  const auto offset = static_cast<std::uint32_t>(net.size());
  auto map = [&](NeuronId id) { return NeuronId{id.value + offset}; };
  for (const NeuronSpec& n : iks.net.neurons()) net.add_neuron(n);
  for (const Edge& e : iks.net.edges()) net.add_edge(map(e.src), map(e.dst), e.weight, e.label);
  for (NeuronId id : iks.net.with_tag(Tag::Decision)) seq.decisions.push_back(map(id));
  for (NeuronId id : iks.net.with_tag(Tag::Emotion)) seq.emotions.push_back(map(id));

  for (const std::string& name : spec.concepts) seq.concepts.push_back(map(iks.representative(name)));
  double min_thr = net.neuron(seq.concepts.front()).threshold;
  for (NeuronId c : seq.concepts) min_thr = std::min(min_thr, net.neuron(c).threshold);
  if (!(min_thr > 0.0)) throw Error(ErrorCode::Config, "letter concepts need a positive threshold");
  seq.handoff_weight = min_thr / 2;
  for (int i = 0; i < k; ++i) {
    NeuronId c = seq.concepts[i];
    net.add_edge(seq.letters[i], c, net.neuron(c).threshold - seq.handoff_weight, "symbol-concept");
    net.add_edge(c, seq.letters[i], 1.0, "concept-symbol");
  }
  return seq;
}

CountingSession::CountingSession(const SequenceNetwork& seq, std::uint64_t seed,
                                 std::optional<Position> at)
    : seq_(seq),
      net_(seq.net),
      sim_(net_, initial_state(seq, at), seed),
      // One matching cycle is what the equality detector neurons see.
      wm_(sim_, AlternationConfig{2, 1}) {
  wm_.add_role(RoleNeuron{seq.current_number, kCurrentNumber, 0, seq.numbers});
  wm_.add_role(RoleNeuron{seq.current_letter, kCurrentLetter, 0, seq.letters});
  wm_.add_role(RoleNeuron{seq.goal, kGoal, 1, seq.goal_inputs});
  for (int i = 0; i < seq.k; ++i) wm_.set_symbol_identity(seq.goal_inputs[i], seq.numbers[i]);

  if (!at) return;
  wm_.adopt(kCurrentNumber, seq.numbers[at->number - 1]);
  wm_.adopt(kCurrentLetter, seq.letters[at->letter - 1]);
  started_ = true;
}

void CountingSession::start_count(int letter_start) {
  if (started_ || !firing_numbers(round()).empty() || !firing_letters(round()).empty())
    throw Error(ErrorCode::AlreadyStarted, "count already running");
  if (letter_start < 1 || letter_start > seq_.k)
    throw Error(ErrorCode::Config, "letter start outside 1..k");
  // Keep increments on even rounds so the two-token overlap lands off the
  // current roles' slot.
  if (round() % 2 != 0) advance(1);
  const int r0 = round();
  for (NeuronId role : {seq_.current_number, seq_.current_letter}) {
    ExternalSignal s;
    s.targets = {role};
    s.weight = clamp_weight(net_.neuron(role));
    s.start_round = r0;
    s.label = "start-role";
    sim_.schedule(std::move(s));
  }
  ExternalSignal go;
  go.targets = {seq_.numbers.front(), seq_.letters[letter_start - 1]};
  go.weight = seq_.params.s + seq_.params.exc;
  go.start_round = r0 + 1;
  go.label = "start";
  sim_.schedule(std::move(go));
  sim_.note("start");
  started_ = true;
  advance(2);
  wm_.adopt(kCurrentNumber, seq_.numbers.front());
  wm_.adopt(kCurrentLetter, seq_.letters[letter_start - 1]);
}

void CountingSession::set_goal(int number) {
  if (number < 1 || number > seq_.k)
    throw Error(ErrorCode::GoalOutOfRange, "goal " + std::to_string(number) + " outside 1.." +
                                               std::to_string(seq_.k));
  wm_.bind(kGoal, seq_.goal_inputs[number - 1]);
}

void CountingSession::post_excite(int round, int duration) {
  ExternalSignal s;
  s.targets = seq_.chain();
  s.weight = seq_.params.exc;
  s.start_round = round;
  s.duration = duration;
  s.label = "excite";
  sim_.schedule(std::move(s));
}

void CountingSession::post_inhibit(int round, int duration) {
  ExternalSignal s;
  s.targets = seq_.chain();
  s.weight = seq_.params.inh;
  s.start_round = round;
  s.duration = duration;
  s.label = "inhibit";
  sim_.schedule(std::move(s));
}

int CountingSession::post_increment() {
  auto n = number_position();
  auto l = letter_position();
  if (!n || !l) throw Error(ErrorCode::Config, "increment needs exactly one current position");
  if (*n == seq_.k || *l == seq_.k) throw Error(ErrorCode::AtEnd, "sequence end reached");
  const PulseSchedule& ps = seq_.schedule;
  const int now = round();
  post_excite(now + ps.excite_at, ps.excite_duration);
  post_inhibit(now + ps.inhibit_at, ps.inhibit_duration);
  sim_.note("increment");
  return now + ps.cycle();
}

void CountingSession::increment() {
  const int until = post_increment();
  advance(until - round());
  if (auto n = number_position()) wm_.adopt(kCurrentNumber, seq_.numbers[*n - 1]);
  if (auto l = letter_position()) wm_.adopt(kCurrentLetter, seq_.letters[*l - 1]);
}

void CountingSession::advance(int rounds) { wm_.advance(rounds); }

std::vector<int> CountingSession::firing_numbers(int round) const {
  std::vector<int> out;
  const FiringState& s = sim_.trace().at(round);
  for (int i = 0; i < seq_.k; ++i)
    if (s.fires(seq_.numbers[i])) out.push_back(i + 1);
  return out;
}

std::vector<int> CountingSession::firing_letters(int round) const {
  std::vector<int> out;
  const FiringState& s = sim_.trace().at(round);
  for (int i = 0; i < seq_.k; ++i)
    if (s.fires(seq_.letters[i])) out.push_back(i + 1);
  return out;
}

std::optional<int> CountingSession::number_position() const {
  return unique_position(firing_numbers(round()));
}

std::optional<int> CountingSession::letter_position() const {
  return unique_position(firing_letters(round()));
}

bool CountingSession::detector_fires(int number) const {
  return sim_.state().fires(seq_.detectors.at(static_cast<std::size_t>(number - 1)));
}

namespace {

QueryResult run_query(const SequenceNetwork& seq, int letter_start, int goal_number,
                      int letter_index, const QueryOptions& opt, Trace* trace,
                      std::unique_ptr<CountingSession>* keep) {
  if (seq.concepts.empty()) throw Error(ErrorCode::Config, "sequence network has no IKS");
  auto session = std::make_unique<CountingSession>(seq, opt.seed);
  CountingSession& cs = *session;
  cs.set_goal(goal_number);
  cs.start_count(letter_start);

  const PulseSchedule& ps = seq.schedule;
  int ignite = cs.round();
  int verdict = first_odd_at_least(ignite + 1) + 1;
  int free_at = cs.round();
  bool rebind = false;
  int increments = 0;
  const int limit = cs.round() + kStuckRounds * (seq.k + 1);
  while (!cs.detector_fires(goal_number)) {
    if (cs.round() > limit) throw Error(ErrorCode::Config, "counting did not reach the goal");
    if (rebind && cs.round() >= free_at) {
      if (auto n = cs.number_position())
        cs.wm().adopt(kCurrentNumber, seq.numbers[*n - 1]);
      if (auto l = cs.letter_position())
        cs.wm().adopt(kCurrentLetter, seq.letters[*l - 1]);
      rebind = false;
    }
    if (cs.round() >= verdict && cs.round() >= free_at) {
      const int now = cs.round();
      free_at = cs.post_increment();
      ++increments;
      rebind = true;
      ignite = now + ps.excite_at + 1;
      verdict = std::max(first_odd_at_least(ignite + 1) + 1, free_at);
    }
    cs.advance(1);
  }

  const int detected = cs.round();
  cs.sim().note("equal");
  ExternalSignal handoff;
  handoff.targets = seq.concepts;
  handoff.weight = seq.handoff_weight;
  handoff.start_round = detected;
  handoff.duration = 2;
  handoff.label = "handoff";
  cs.sim().schedule(std::move(handoff));
  cs.wm().release(kGoal);
  cs.wm().release(kCurrentNumber);
  cs.wm().release(kCurrentLetter);

  QueryResult out;
  out.letter_index = letter_index;
  out.letter = seq.letter_symbols[letter_index - 1];
  out.detection_round = detected;
  out.increments = increments;

  const Network& net = cs.network();
  const FiringState snapshot = cs.sim().state();
  const auto& signals = cs.sim().signals();
  out.decision = run_cascade(net, snapshot, signals, seq.decisions, opt.horizon, opt.trials,
                             opt.seed);
  if (opt.emotion)
    out.emotion = run_cascade(net, snapshot, signals, seq.emotions, opt.horizon, opt.trials,
                              opt.seed);
  out.latency_rounds = detected + out.decision.stabilization_round.value_or(opt.horizon);

  // One representative continuation for the trace.
  cs.advance(opt.horizon);
  if (trace) *trace = cs.sim().trace();
  if (keep) *keep = std::move(session);
  return out;
}

}  // namespace

QueryResult run_query1(const SequenceNetwork& seq, int g, const QueryOptions& opt, Trace* trace,
                       std::unique_ptr<CountingSession>* keep) {
  if (g < 1 || g > seq.k)
    throw Error(ErrorCode::GoalOutOfRange,
                "goal " + std::to_string(g) + " outside 1.." + std::to_string(seq.k));
  return run_query(seq, 1, g, g, opt, trace, keep);
}

QueryResult run_query2(const SequenceNetwork& seq, std::string_view letter, int g,
                       const QueryOptions& opt, Trace* trace,
                       std::unique_ptr<CountingSession>* keep) {
  const int i = seq.letter_index(letter);
  if (g < 1 || g > seq.k - i)
    throw Error(ErrorCode::GoalOutOfRange, "goal " + std::to_string(g) + " outside 1.." +
                                               std::to_string(seq.k - i));
  return run_query(seq, i, g + 1, i + g, opt, trace, keep);
}

LatencyBreakdown latency_breakdown(const SequenceNetwork& seq, int g, const QueryResult& r) {
  LatencyBreakdown b;
  b.d = seq.schedule.cycle();
  // The concept fires one round into the cascade; the rest is IKS settling.
  b.t_iks = r.latency_rounds - r.detection_round - 1;
  b.c = r.latency_rounds - g * b.d - b.t_iks;
  return b;
}

}  // namespace dualks
