#include "dualks/lexicon.hpp"

#include "dualks/error.hpp"

namespace dualks {

NeuronId Lexicon::add_refractory(NeuronId x, const std::string& name) {
  NeuronId r = net_.add_neuron(NeuronSpec::threshold_gate(1.0, {}, name));
  net_.add_edge(x, r, kLinkWeight, "refractory");
  net_.add_edge(r, x, kRefractoryWeight, "refractory");
  return r;
}

const LexiconEntry& Lexicon::add_symbol(const std::string& symbol,
                                        std::map<std::string, std::string> attributes,
                                        std::optional<NeuronId> partner) {
  if (entries_.count(symbol)) throw Error(ErrorCode::DuplicateSymbol, symbol);
  if (partner && !net_.contains(*partner))
    throw Error(ErrorCode::UnknownNeuron, "partner of " + symbol);

  LexiconEntry e;
  e.symbol = symbol;
  e.attributes = std::move(attributes);
  e.neuron = net_.add_neuron(NeuronSpec::threshold_gate(1.0, {Tag::Symbol}, "lex:" + symbol));
  if (partner) {
    e.partner = *partner;
    net_.neuron(*partner).tags.insert(Tag::Symbol);
  } else {
    e.partner = net_.add_neuron(NeuronSpec::threshold_gate(1.0, {Tag::Symbol}, symbol));
  }
  net_.add_edge(e.neuron, e.partner, kLinkWeight, "lexicon");
  net_.add_edge(e.partner, e.neuron, kLinkWeight, "lexicon");
  add_refractory(e.neuron, "lex-refractory:" + symbol);
  add_refractory(e.partner, "sks-refractory:" + symbol);
  return entries_.emplace(symbol, std::move(e)).first->second;
}

const LexiconEntry& Lexicon::lookup(const std::string& symbol) const {
  auto it = entries_.find(symbol);
  if (it == entries_.end()) throw Error(ErrorCode::NotFound, symbol);
  return it->second;
}

ExternalSignal Lexicon::trigger(const std::string& symbol, int round) const {
  const LexiconEntry& e = lookup(symbol);
  ExternalSignal s;
  s.targets = {e.neuron};
  s.weight = clamp_weight(net_.neuron(e.neuron));
  s.start_round = round;
  s.label = "lexicon:" + symbol;
  return s;
}

}  // namespace dualks
