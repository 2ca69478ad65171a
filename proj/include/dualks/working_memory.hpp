#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualks/network.hpp"
#include "dualks/simulator.hpp"

namespace dualks {

struct RoleNeuron {
  NeuronId id;
  std::string name;
  int phase = 0;
  std::vector<NeuronId> pool;  // symbol neurons this role may bind
};

struct AlternationConfig {
  int period = 2;
  int window = 2;  // co-firing slots to establish a binding or an equality
};

enum class BindingMode {
  Clamped,    // phase-gated clamps drive role and symbol on the role's slots
  Sustained,  // the circuit keeps role and symbol firing; read out on the slot
};

struct Binding {
  RoleNeuron role;
  NeuronId symbol;
  int established_round = 0;
  BindingMode mode = BindingMode::Clamped;
  bool active = false;
};

struct SplitAttention {
  int round = 0;
  std::string role;
  std::vector<NeuronId> symbols;
};

// Role neurons bound to symbol neurons by synchronized firing on fixed
// round-robin phase slots. Owns the round loop of the attached simulation so it
// can post the clamp for each slot just before that slot's round.
class WorkingMemory {
 public:
  WorkingMemory(Simulation& sim, AlternationConfig cfg);

  // Creates a role neuron (threshold 1, tagged role) in `net`.
  static NeuronId make_role_neuron(Network& net, const std::string& name);

  void add_role(RoleNeuron role);
  const RoleNeuron& role(const std::string& name) const;
  const std::vector<RoleNeuron>& roles() const { return roles_; }
  const AlternationConfig& config() const { return cfg_; }

  // Symbol-identity classes: neurons that stand for the same symbol compare
  // equal in detect_equal.
  void set_symbol_identity(NeuronId neuron, NeuronId canonical);
  NeuronId canonical(NeuronId neuron) const;

  Binding bind(const std::string& role, NeuronId symbol);
  // Records a binding that an external circuit maintains.
  Binding adopt(const std::string& role, NeuronId symbol);
  void release(const Binding& binding);
  void release(const std::string& role);
  std::optional<Binding> binding(const std::string& role) const;
  bool is_slot(const std::string& role, int round) const;

  // Steps the simulation, posting slot clamps for every clamped binding.
  void advance(int rounds);

  // True iff for `window` consecutive cycles inside [from, to] the symbol read
  // in role_a's slot equals the symbol read in role_b's next slot.
  bool detect_equal(const std::string& role_a, const std::string& role_b, const Trace& trace,
                    int from, int to) const;

  // Symbol read out for a role at a round: the unique firing pool neuron when
  // the role fires, nothing otherwise (including ambiguous co-firing).
  std::optional<NeuronId> read(const RoleNeuron& role, const Trace& trace, int round) const;

  // Rounds in the role's slots where it co-fires with more than one pool symbol.
  std::vector<SplitAttention> split_attention(const Trace& trace, int from, int to) const;
  // Same scan over every round, ignoring slots.
  std::vector<SplitAttention> split_attention_all_rounds(const Trace& trace, int from,
                                                         int to) const;
  // Rounds where a clamped-bound role fires outside its slots.
  std::vector<int> phase_violations(const Trace& trace, int from, int to) const;

 private:
  struct Active {
    Binding binding;
    std::vector<EdgeId> edges;
    int bound_at = 0;
  };

  RoleNeuron& role_mut(const std::string& name);
  int next_slot(const RoleNeuron& role, int after) const;

  Simulation& sim_;
  AlternationConfig cfg_;
  std::vector<RoleNeuron> roles_;
  std::map<std::string, Active> active_;
  std::map<NeuronId, NeuronId> identity_;
  struct Span {
    std::string role;
    BindingMode mode;
    int from;
    int to;  // exclusive; INT_MAX while active
  };
  std::vector<Span> history_;
};

}  // namespace dualks
