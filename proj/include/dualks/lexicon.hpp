#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualks/network.hpp"
#include "dualks/simulator.hpp"

namespace dualks {

struct LexiconEntry {
  std::string symbol;
  NeuronId neuron;   // lexicon-side neuron
  NeuronId partner;  // SKS symbol neuron
  std::map<std::string, std::string> attributes;
};

// Random-access symbol store. Each entry is a lexicon neuron linked both ways
// to an SKS symbol neuron; a refractory interneuron on each side stops the pair
// from reverberating, so one trigger gives one firing on each side.
class Lexicon {
 public:
  static constexpr double kLinkWeight = 2.0;
  static constexpr double kRefractoryWeight = -4.0;

  Lexicon() = default;

  // Creates the lexicon neuron and, unless `partner` is given, a fresh SKS
  // symbol neuron.
  const LexiconEntry& add_symbol(const std::string& symbol,
                                 std::map<std::string, std::string> attributes = {},
                                 std::optional<NeuronId> partner = std::nullopt);
  const LexiconEntry& lookup(const std::string& symbol) const;
  bool contains(const std::string& symbol) const { return entries_.count(symbol) != 0; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }

  // Clamp that makes the entry's lexicon neuron fire at round + 1.
  ExternalSignal trigger(const std::string& symbol, int round) const;

  Network& network() { return net_; }
  const Network& network() const { return net_; }

 private:
  NeuronId add_refractory(NeuronId x, const std::string& name);

  Network net_;
  std::map<std::string, LexiconEntry> entries_;
};

}  // namespace dualks
