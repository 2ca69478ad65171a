#include "dualks/network.hpp"

#include <array>
#include <utility>

#include "dualks/error.hpp"

namespace dualks {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::UnknownNeuron: return "UnknownNeuron";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::NoFreeNeuron: return "NoFreeNeuron";
    case ErrorCode::RoleBusy: return "RoleBusy";
    case ErrorCode::RoleUnbound: return "RoleUnbound";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::AlreadyStarted: return "AlreadyStarted";
    case ErrorCode::GoalOutOfRange: return "GoalOutOfRange";
    case ErrorCode::AtEnd: return "AtEnd";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DuplicateTemplate: return "DuplicateTemplate";
    case ErrorCode::NoTemplate: return "NoTemplate";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::Ambiguous: return "Ambiguous";
    case ErrorCode::Incomplete: return "Incomplete";
  }
  return "Error";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return 2;
    case ErrorCode::NoTemplate:
    case ErrorCode::NoCandidates:
    case ErrorCode::Ambiguous:
    case ErrorCode::Incomplete: return 4;
    default: return 3;
  }
}

namespace {

constexpr std::array<std::pair<Tag, std::string_view>, 9> kTagNames{{
    {Tag::Input, "input"},
    {Tag::Output, "output"},
    {Tag::Decision, "decision"},
    {Tag::Emotion, "emotion"},
    {Tag::Number, "number"},
    {Tag::Letter, "letter"},
    {Tag::Role, "role"},
    {Tag::Concept, "concept"},
    {Tag::Symbol, "symbol"},
}};

}  // namespace

std::string_view to_string(Tag tag) {
  for (const auto& [t, name] : kTagNames)
    if (t == tag) return name;
  return "?";
}

std::optional<Tag> tag_from_string(std::string_view name) {
  for (const auto& [t, n] : kTagNames)
    if (n == name) return t;
  return std::nullopt;
}

std::vector<Tag> TagSet::list() const {
  std::vector<Tag> out;
  for (const auto& [t, name] : kTagNames)
    if (contains(t)) out.push_back(t);
  return out;
}

NeuronSpec NeuronSpec::threshold_gate(double threshold, TagSet tags, std::string name) {
  NeuronSpec s;
  s.kind = NeuronKind::Threshold;
  s.threshold = threshold;
  s.tags = tags;
  s.name = std::move(name);
  return s;
}

NeuronSpec NeuronSpec::sigmoid(double threshold, double steepness, TagSet tags, std::string name) {
  NeuronSpec s;
  s.kind = NeuronKind::Sigmoid;
  s.threshold = threshold;
  s.steepness = steepness;
  s.tags = tags;
  s.name = std::move(name);
  return s;
}

NeuronId Network::add_neuron(NeuronSpec spec) {
  if (spec.failure_prob < 0.0 || spec.failure_prob > 1.0)
    throw Error(ErrorCode::Config, "failure_prob must lie in [0,1]");
  if (spec.kind == NeuronKind::Sigmoid && !(spec.steepness > 0.0))
    throw Error(ErrorCode::Config, "sigmoid steepness must be positive");
  if (spec.kind == NeuronKind::Threshold) spec.failure_prob = 0.0;
  NeuronId id{static_cast<std::uint32_t>(neurons_.size())};
  neurons_.push_back(std::move(spec));
  in_.emplace_back();
  out_.emplace_back();
  return id;
}

EdgeId Network::add_edge(NeuronId src, NeuronId dst, double weight, std::string label) {
  if (!contains(src) || !contains(dst))
    throw Error(ErrorCode::UnknownNeuron, "edge " + std::to_string(src.value) + "->" +
                                              std::to_string(dst.value) + " in a network of " +
                                              std::to_string(size()) + " neurons");
  EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edges_.push_back(Edge{src, dst, weight, std::move(label)});
  in_[dst.value].push_back(id);
  out_[src.value].push_back(id);
  return id;
}

void Network::require(NeuronId id) const {
  if (!contains(id))
    throw Error(ErrorCode::UnknownNeuron, "neuron " + std::to_string(id.value));
}

const NeuronSpec& Network::neuron(NeuronId id) const {
  require(id);
  return neurons_[id.value];
}

NeuronSpec& Network::neuron(NeuronId id) {
  require(id);
  return neurons_[id.value];
}

const Edge& Network::edge(EdgeId id) const { return edges_.at(id.value); }
Edge& Network::edge(EdgeId id) { return edges_.at(id.value); }

const std::vector<EdgeId>& Network::incoming(NeuronId id) const {
  require(id);
  return in_[id.value];
}

const std::vector<EdgeId>& Network::outgoing(NeuronId id) const {
  require(id);
  return out_[id.value];
}

std::optional<EdgeId> Network::find_edge(NeuronId src, NeuronId dst,
                                         std::string_view label) const {
  for (EdgeId e : outgoing(src)) {
    const Edge& edge = edges_[e.value];
    if (edge.dst == dst && (label.empty() || edge.label == label)) return e;
  }
  return std::nullopt;
}

std::vector<NeuronId> Network::with_tag(Tag tag) const {
  std::vector<NeuronId> out;
  for (std::uint32_t i = 0; i < neurons_.size(); ++i)
    if (neurons_[i].tags.contains(tag)) out.push_back(NeuronId{i});
  return out;
}

std::optional<NeuronId> Network::find(std::string_view name) const {
  for (std::uint32_t i = 0; i < neurons_.size(); ++i)
    if (neurons_[i].name == name) return NeuronId{i};
  return std::nullopt;
}

}  // namespace dualks
