#include <set>

#include "doctest.h"
#include "dualks/error.hpp"
#include "dualks/lexicon.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dualks;
using testing::code_of;

namespace {

const std::vector<std::string> kGreek = {
    "alpha", "beta", "gamma", "delta",   "epsilon", "zeta", "eta",     "theta",
    "iota",  "kappa", "lambda", "mu",    "nu",      "xi",   "omicron", "pi",
    "rho",   "sigma", "tau",   "upsilon", "phi",    "chi",  "psi",     "omega"};

}  // namespace

TEST_CASE("add and look up") {
  Lexicon lex;
  const LexiconEntry& e = lex.add_symbol("delta", {{"pos", "noun"}});
  CHECK(e.symbol == "delta");
  CHECK(lex.network().neuron(e.neuron).tags.contains(Tag::Symbol));
  CHECK(e.neuron != e.partner);
  const LexiconEntry& back = lex.lookup("delta");
  CHECK(back.neuron == e.neuron);
  CHECK(back.attributes.at("pos") == "noun");
  CHECK(code_of([&] { lex.add_symbol("delta"); }) == ErrorCode::DuplicateSymbol);
  CHECK(code_of([&] { lex.lookup("zeta-prime"); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { lex.trigger("zeta-prime", 0); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { lex.add_symbol("eta", {}, NeuronId{999}); }) == ErrorCode::UnknownNeuron);
}

TEST_CASE("the Greek alphabet round-trips") {
  Lexicon lex;
  for (const auto& s : kGreek) lex.add_symbol(s);
  CHECK(lex.size() == 24);
  std::set<NeuronId> seen;
  for (const auto& s : kGreek) {
    const LexiconEntry& e = lex.lookup(s);
    CHECK(e.symbol == s);
    CHECK(lex.network().neuron(e.partner).name == s);
    seen.insert(e.neuron);
  }
  CHECK(seen.size() == 24);
}

TEST_CASE("an existing SKS neuron can be the partner") {
  Lexicon lex;
  NeuronId sks = lex.network().add_neuron(NeuronSpec::threshold_gate(1.0, {}, "rep-beta"));
  const LexiconEntry& e = lex.add_symbol("beta", {}, sks);
  CHECK(e.partner == sks);
  CHECK(lex.network().neuron(sks).tags.contains(Tag::Symbol));
}

TEST_CASE("triggering a lexicon neuron fires its partner one round later, once") {
  Lexicon lex;
  for (const auto& s : kGreek) lex.add_symbol(s);
  const LexiconEntry& e = lex.lookup("delta");
  const Network& net = lex.network();
  Simulation sim(lex.network(), FiringState::silent(net.size()), 0);
  sim.schedule(lex.trigger("delta", 0));
  sim.advance(8);
  const Trace& tr = sim.trace();
  for (int t = 0; t <= 8; ++t) {
    CAPTURE(t);
    CHECK(tr.fires(e.neuron, t) == (t == 1));
    CHECK(tr.fires(e.partner, t) == (t == 2));
  }
  const LexiconEntry& other = lex.lookup("gamma");
  for (int t = 0; t <= 8; ++t) CHECK_FALSE(tr.fires(other.partner, t));
}

TEST_CASE("links fire both ways, matching the naive oracle") {
  Lexicon lex;
  for (const auto& s : kGreek) lex.add_symbol(s);
  const Network& net = lex.network();
  for (const auto& s : kGreek) {
    const LexiconEntry& e = lex.lookup(s);
    for (NeuronId from : {e.neuron, e.partner}) {
      const NeuronId to = from == e.neuron ? e.partner : e.neuron;
      oracle::Firing init(net.size(), 0);
      init[from.value] = 1;
      auto expect = oracle::naive_run(net, init, 5);
      Trace got = run(net, FiringState::with_firing(net.size(), std::vector<NeuronId>{from}), {},
                      5, 0);
      CHECK(got.fires(to, 1));
      CHECK_FALSE(got.fires(from, 2));
      for (int t = 0; t <= 5; ++t) CHECK(got.at(t).firing == expect[t]);
    }
  }
}
