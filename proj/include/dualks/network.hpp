#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dualks {

struct NeuronId {
  std::uint32_t value = 0;

  friend bool operator==(NeuronId, NeuronId) = default;
  friend auto operator<=>(NeuronId, NeuronId) = default;
};

struct EdgeId {
  std::uint32_t value = 0;

  friend bool operator==(EdgeId, EdgeId) = default;
  friend auto operator<=>(EdgeId, EdgeId) = default;
};

enum class NeuronKind { Threshold, Sigmoid };

enum class Tag : std::uint16_t {
  Input = 1u << 0,
  Output = 1u << 1,
  Decision = 1u << 2,
  Emotion = 1u << 3,
  Number = 1u << 4,
  Letter = 1u << 5,
  Role = 1u << 6,
  Concept = 1u << 7,
  Symbol = 1u << 8,
};

std::string_view to_string(Tag tag);
std::optional<Tag> tag_from_string(std::string_view name);

class TagSet {
 public:
  TagSet() = default;
  TagSet(std::initializer_list<Tag> tags) {
    for (Tag t : tags) insert(t);
  }

  void insert(Tag t) { bits_ |= static_cast<std::uint16_t>(t); }
  void erase(Tag t) { bits_ &= static_cast<std::uint16_t>(~static_cast<std::uint16_t>(t)); }
  bool contains(Tag t) const { return (bits_ & static_cast<std::uint16_t>(t)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<Tag> list() const;

  friend bool operator==(TagSet, TagSet) = default;

 private:
  std::uint16_t bits_ = 0;
};

struct NeuronSpec {
  NeuronKind kind = NeuronKind::Threshold;
  double threshold = 1.0;
  double steepness = 1.0;     // sigmoid slope; unused for threshold neurons
  double failure_prob = 0.0;  // probability the firing bit is flipped
  TagSet tags;
  std::string name;

  static NeuronSpec threshold_gate(double threshold, TagSet tags = {}, std::string name = {});
  static NeuronSpec sigmoid(double threshold, double steepness, TagSet tags = {},
                            std::string name = {});
};

struct Edge {
  NeuronId src;
  NeuronId dst;
  double weight = 0.0;
  std::string label;
};

// Presynaptic history: a neuron that fired at t and is silent at t+1 keeps
// contributing magnitude_fraction * weight on its outgoing edges to the
// potentials computed at rounds t+1 .. t+window (so it influences firing at
// rounds t+2 .. t+1+window).
struct ResidualConfig {
  bool enabled = false;
  double magnitude_fraction = 0.0;
  int window = 1;
};

class Network {
 public:
  NeuronId add_neuron(NeuronSpec spec);
  EdgeId add_edge(NeuronId src, NeuronId dst, double weight, std::string label = {});

  std::size_t size() const { return neurons_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(NeuronId id) const { return id.value < neurons_.size(); }

  const NeuronSpec& neuron(NeuronId id) const;
  NeuronSpec& neuron(NeuronId id);
  const Edge& edge(EdgeId id) const;
  Edge& edge(EdgeId id);
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NeuronSpec>& neurons() const { return neurons_; }

  // Edge ids entering / leaving a neuron, in insertion order.
  const std::vector<EdgeId>& incoming(NeuronId id) const;
  const std::vector<EdgeId>& outgoing(NeuronId id) const;
  std::optional<EdgeId> find_edge(NeuronId src, NeuronId dst, std::string_view label = {}) const;

  std::vector<NeuronId> with_tag(Tag tag) const;
  std::optional<NeuronId> find(std::string_view name) const;

  ResidualConfig& residual() { return residual_; }
  const ResidualConfig& residual() const { return residual_; }

 private:
  void require(NeuronId id) const;

  std::vector<NeuronSpec> neurons_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::vector<EdgeId>> out_;
  ResidualConfig residual_;
};

}  // namespace dualks

template <>
struct std::hash<dualks::NeuronId> {
  std::size_t operator()(dualks::NeuronId id) const noexcept { return id.value; }
};
