#include "dualks/working_memory.hpp"

#include <algorithm>
#include <climits>

#include "dualks/error.hpp"

namespace dualks {

WorkingMemory::WorkingMemory(Simulation& sim, AlternationConfig cfg) : sim_(sim), cfg_(cfg) {
  if (cfg_.period < 1 || cfg_.window < 1)
    throw Error(ErrorCode::Config, "alternation period and window must be positive");
}

NeuronId WorkingMemory::make_role_neuron(Network& net, const std::string& name) {
  return net.add_neuron(NeuronSpec::threshold_gate(1.0, {Tag::Role}, name));
}

void WorkingMemory::add_role(RoleNeuron role) {
  if (role.phase < 0 || role.phase >= cfg_.period)
    throw Error(ErrorCode::Config, "role phase outside [0, period): " + role.name);
  for (const RoleNeuron& r : roles_)
    if (r.name == role.name) throw Error(ErrorCode::Config, "duplicate role " + role.name);
  if (!sim_.network().contains(role.id)) throw Error(ErrorCode::UnknownNeuron, role.name);
  roles_.push_back(std::move(role));
}

const RoleNeuron& WorkingMemory::role(const std::string& name) const {
  for (const RoleNeuron& r : roles_)
    if (r.name == name) return r;
  throw Error(ErrorCode::Config, "unknown role " + name);
}

RoleNeuron& WorkingMemory::role_mut(const std::string& name) {
  for (RoleNeuron& r : roles_)
    if (r.name == name) return r;
  throw Error(ErrorCode::Config, "unknown role " + name);
}

void WorkingMemory::set_symbol_identity(NeuronId neuron, NeuronId canonical) {
  identity_[neuron] = canonical;
}

NeuronId WorkingMemory::canonical(NeuronId neuron) const {
  auto it = identity_.find(neuron);
  return it == identity_.end() ? neuron : it->second;
}

bool WorkingMemory::is_slot(const std::string& name, int round) const {
  const RoleNeuron& r = role(name);
  return ((round % cfg_.period) + cfg_.period) % cfg_.period == r.phase;
}

int WorkingMemory::next_slot(const RoleNeuron& r, int after) const {
  int t = after + 1;
  while (t % cfg_.period != r.phase) ++t;
  return t;
}

Binding WorkingMemory::bind(const std::string& name, NeuronId symbol) {
  RoleNeuron& r = role_mut(name);
  if (active_.count(name)) throw Error(ErrorCode::RoleBusy, name);
  Network& net = sim_.network();
  if (!net.contains(symbol))
    throw Error(ErrorCode::UnknownNeuron, "symbol " + std::to_string(symbol.value));
  if (std::find(r.pool.begin(), r.pool.end(), symbol) == r.pool.end()) r.pool.push_back(symbol);

  Active a;
  a.edges.push_back(net.add_edge(r.id, symbol, net.neuron(symbol).threshold / 2, "binding"));
  a.edges.push_back(net.add_edge(symbol, r.id, net.neuron(r.id).threshold / 2, "binding"));
  a.bound_at = next_slot(r, sim_.round());
  a.binding = Binding{r, symbol, a.bound_at + (cfg_.window - 1) * cfg_.period,
                      BindingMode::Clamped, true};
  history_.push_back(Span{name, BindingMode::Clamped, a.bound_at, INT_MAX});
  sim_.note("bind:" + name + "=" + std::to_string(symbol.value));
  active_[name] = a;
  return a.binding;
}

Binding WorkingMemory::adopt(const std::string& name, NeuronId symbol) {
  RoleNeuron& r = role_mut(name);
  if (!sim_.network().contains(symbol))
    throw Error(ErrorCode::UnknownNeuron, "symbol " + std::to_string(symbol.value));
  if (std::find(r.pool.begin(), r.pool.end(), symbol) == r.pool.end()) r.pool.push_back(symbol);
  auto it = active_.find(name);
  if (it != active_.end()) {
    if (it->second.binding.mode != BindingMode::Sustained) throw Error(ErrorCode::RoleBusy, name);
    it->second.binding.symbol = symbol;
    it->second.binding.established_round = sim_.round();
    sim_.note("rebind:" + name + "=" + std::to_string(symbol.value));
    return it->second.binding;
  }
  Active a;
  a.bound_at = sim_.round();
  a.binding = Binding{r, symbol, sim_.round(), BindingMode::Sustained, true};
  history_.push_back(Span{name, BindingMode::Sustained, a.bound_at, INT_MAX});
  sim_.note("bind:" + name + "=" + std::to_string(symbol.value));
  active_[name] = a;
  return a.binding;
}

void WorkingMemory::release(const Binding& binding) {
  auto it = active_.find(binding.role.name);
  if (it == active_.end() || it->second.binding.symbol != binding.symbol) return;
  release(binding.role.name);
}

void WorkingMemory::release(const std::string& name) {
  auto it = active_.find(name);
  if (it == active_.end()) return;
  Network& net = sim_.network();
  for (EdgeId e : it->second.edges) net.edge(e).weight = 0.0;
  const RoleNeuron& r = it->second.binding.role;
  ExternalSignal inhibit;
  inhibit.targets = {r.id};
  inhibit.weight = -clamp_weight(net.neuron(r.id));
  inhibit.start_round = sim_.round();
  inhibit.duration = cfg_.window;
  inhibit.label = "release:" + name;
  sim_.schedule(std::move(inhibit));
  for (Span& s : history_)
    if (s.role == name && s.to == INT_MAX) s.to = sim_.round() + 1;
  sim_.note("release:" + name);
  active_.erase(it);
}

std::optional<Binding> WorkingMemory::binding(const std::string& name) const {
  auto it = active_.find(name);
  if (it == active_.end()) return std::nullopt;
  return it->second.binding;
}

void WorkingMemory::advance(int rounds) {
  for (int i = 0; i < rounds; ++i) {
    const int now = sim_.round();
    for (const auto& [name, a] : active_) {
      if (a.binding.mode != BindingMode::Clamped) continue;
      if (!is_slot(name, now + 1)) continue;
      const Network& net = sim_.network();
      for (NeuronId target : {a.binding.role.id, a.binding.symbol}) {
        ExternalSignal s;
        s.targets = {target};
        s.weight = clamp_weight(net.neuron(target));
        s.start_round = now;
        s.duration = 1;
        s.label = "slot:" + name;
        sim_.schedule(std::move(s));
      }
    }
    sim_.step();
  }
}

std::optional<NeuronId> WorkingMemory::read(const RoleNeuron& r, const Trace& trace,
                                            int round) const {
  if (round < 0 || round >= static_cast<int>(trace.states.size())) return std::nullopt;
  const FiringState& s = trace.at(round);
  if (!s.fires(r.id)) return std::nullopt;
  std::optional<NeuronId> found;
  for (NeuronId p : r.pool) {
    if (p.value >= s.firing.size() || !s.fires(p)) continue;
    if (found) return std::nullopt;
    found = p;
  }
  return found;
}

bool WorkingMemory::detect_equal(const std::string& role_a, const std::string& role_b,
                                 const Trace& trace, int from, int to) const {
  for (const std::string* name : {&role_a, &role_b}) {
    bool ever = std::any_of(history_.begin(), history_.end(),
                            [&](const Span& s) { return s.role == *name; });
    if (!ever) throw Error(ErrorCode::RoleUnbound, *name);
  }
  const RoleNeuron& a = role(role_a);
  const RoleNeuron& b = role(role_b);
  int offset = ((b.phase - a.phase) % cfg_.period + cfg_.period) % cfg_.period;
  if (offset == 0) offset = cfg_.period;
  to = std::min(to, static_cast<int>(trace.states.size()) - 1);

  int t = std::max(from, 0);
  while (t % cfg_.period != a.phase) ++t;
  int run = 0;
  for (; t + offset <= to; t += cfg_.period) {
    auto sa = read(a, trace, t);
    auto sb = read(b, trace, t + offset);
    if (sa && sb && canonical(*sa) == canonical(*sb)) {
      if (++run >= cfg_.window) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

namespace {

std::vector<NeuronId> firing_pool(const RoleNeuron& r, const FiringState& s) {
  std::vector<NeuronId> out;
  for (NeuronId p : r.pool)
    if (p.value < s.firing.size() && s.fires(p)) out.push_back(p);
  return out;
}

}  // namespace

std::vector<SplitAttention> WorkingMemory::split_attention(const Trace& trace, int from,
                                                           int to) const {
  std::vector<SplitAttention> out;
  to = std::min(to, static_cast<int>(trace.states.size()) - 1);
  for (const RoleNeuron& r : roles_) {
    for (int t = std::max(from, 0); t <= to; ++t) {
      if (t % cfg_.period != r.phase || !trace.fires(r.id, t)) continue;
      auto syms = firing_pool(r, trace.at(t));
      if (syms.size() > 1) out.push_back(SplitAttention{t, r.name, syms});
    }
  }
  return out;
}

std::vector<SplitAttention> WorkingMemory::split_attention_all_rounds(const Trace& trace, int from,
                                                                      int to) const {
  std::vector<SplitAttention> out;
  to = std::min(to, static_cast<int>(trace.states.size()) - 1);
  for (const RoleNeuron& r : roles_) {
    for (int t = std::max(from, 0); t <= to; ++t) {
      if (!trace.fires(r.id, t)) continue;
      auto syms = firing_pool(r, trace.at(t));
      if (syms.size() > 1) out.push_back(SplitAttention{t, r.name, syms});
    }
  }
  return out;
}

std::vector<int> WorkingMemory::phase_violations(const Trace& trace, int from, int to) const {
  std::vector<int> out;
  to = std::min(to, static_cast<int>(trace.states.size()) - 1);
  for (const Span& s : history_) {
    if (s.mode != BindingMode::Clamped) continue;
    const RoleNeuron& r = role(s.role);
    int end = std::min(to, s.to == INT_MAX ? to : s.to - 1);
    for (int t = std::max(from, s.from); t <= end; ++t)
      if (trace.fires(r.id, t) && t % cfg_.period != r.phase) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dualks
