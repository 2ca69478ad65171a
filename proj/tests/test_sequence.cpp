#include <algorithm>
#include <random>

#include "doctest.h"
#include "dualks/error.hpp"
#include "dualks/sequence.hpp"
#include "dualks/spec_io.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dualks;
using testing::code_of;

namespace {

const SequenceNetwork& demo() {
  static const SequenceNetwork seq = load_spec(testing::fixture("greek-virus.json")).build_sequence();
  return seq;
}

SequenceNetwork bare(int k, const CountParams& p = CountParams::reference()) {
  return build_sequence_network(k, p, ConceptGraph{}, SequenceSpec{});
}

QueryOptions quick(int trials = 400) {
  QueryOptions o;
  o.trials = trials;
  return o;
}

}  // namespace

TEST_CASE("reference tuple satisfies every constraint") {
  CHECK(validate_params(CountParams::reference()).empty());
  CountParams p;
  p.l = 0;
  auto bad = validate_params(p);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front() == Inequality::SelfSustain);
  CHECK(to_string(Inequality::ResidualSavesNext) == "I6");
  CHECK(ordinal(Inequality::ResidualBelowSuccessor) == 7);
}

TEST_CASE("single-constraint mutations fail only their target") {
  struct Mutation {
    Inequality target;
    CountParams p;
  };
  auto with = [](auto edit) {
    CountParams p;
    edit(p);
    return p;
  };
  const std::vector<Mutation> cases = {
      {Inequality::SelfSustain, with([](CountParams& p) { p.l = 2.5, p.inh = -0.5; })},
      {Inequality::NoSpontaneousNext, with([](CountParams& p) { p.s = 3; })},
      {Inequality::ExciteIgnitesNext, with([](CountParams& p) { p.exc = 0.5; })},
      {Inequality::ExciteAloneSilent, with([](CountParams& p) { p.exc = 3; })},
      {Inequality::InhibitKillsCurrent, with([](CountParams& p) { p.inh = -1; })},
      {Inequality::ResidualSavesNext, with([](CountParams& p) { p.inh = -3; })},
      {Inequality::ResidualBelowSuccessor, with([](CountParams& p) { p.s_resid = 2; })},
  };
  for (const auto& m : cases) {
    CAPTURE(to_string(m.target));
    CHECK(validate_params(m.p) == std::vector<Inequality>{m.target});
  }
}

TEST_CASE("validator agrees with brute force on the integer grid") {
  std::size_t valid = 0, mismatches = 0;
  oracle::Tuple t;
  for (t[0] = -5; t[0] <= 5; ++t[0])
    for (t[1] = -5; t[1] <= 5; ++t[1])
      for (t[2] = -5; t[2] <= 5; ++t[2])
        for (t[3] = -5; t[3] <= 5; ++t[3])
          for (t[4] = -5; t[4] <= 5; ++t[4])
            for (t[5] = -5; t[5] <= 5; ++t[5])
              for (t[6] = -5; t[6] <= 5; ++t[6]) {
                const bool expect = oracle::tuple_valid(t);
                const bool got = validate_params(testing::params_from(t)).empty();
                valid += expect;
                mismatches += expect != got;
              }
  CHECK(mismatches == 0);
  CHECK(valid > 0);
  CHECK(valid == oracle::valid_grid(-5, 5).size());
}

TEST_CASE("build shapes") {
  const SequenceNetwork& seq = demo();
  CHECK(seq.k == 24);
  CHECK(seq.numbers.size() + seq.letters.size() == 48);
  CHECK(seq.chain().size() == 48);
  CHECK(seq.letter_symbols.front() == "alpha");
  CHECK(seq.letter_symbols.back() == "omega");
  CHECK(seq.concepts.size() == 24);
  for (NeuronId n : seq.letters) CHECK(seq.net.neuron(n).tags.contains(Tag::Letter));

  int symbol_concept = 0, concept_symbol = 0;
  for (const Edge& e : seq.net.edges()) {
    symbol_concept += e.label == "symbol-concept";
    concept_symbol += e.label == "concept-symbol";
  }
  CHECK(symbol_concept == 24);
  CHECK(concept_symbol == 24);

  SequenceNetwork one = bare(1);
  CHECK(one.numbers.size() == 1);
  for (const Edge& e : one.net.edges()) CHECK(e.label != "successor");

  CountParams p;
  p.l = 0;
  try {
    bare(5, p);
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
    CHECK(std::string(e.what()).find("I1") != std::string::npos);
  }
  PulseSchedule backwards;
  backwards.inhibit_at = 0;
  CHECK(code_of([&] { build_sequence_network(3, {}, {}, {}, backwards); }) == ErrorCode::Config);
}

TEST_CASE("start_count ignites position one") {
  SequenceNetwork seq = bare(6);
  CountingSession cs(seq, 1);
  cs.start_count();
  const int r = cs.round();
  CHECK(cs.firing_numbers(r) == std::vector<int>{1});
  CHECK(cs.firing_letters(r) == std::vector<int>{1});
  cs.advance(10);
  for (int t = r; t <= cs.round(); ++t) {
    CHECK(cs.firing_numbers(t) == std::vector<int>{1});
    CHECK(cs.firing_letters(t) == std::vector<int>{1});
  }
  CHECK(code_of([&] { cs.start_count(); }) == ErrorCode::AlreadyStarted);
}

TEST_CASE("a start pulse of exc alone does not ignite rep(1)") {
  SequenceNetwork seq = bare(6);
  ExternalSignal weak;
  weak.targets = {seq.numbers.front()};
  weak.weight = seq.params.exc;
  weak.start_round = 0;
  auto pot = oracle::potentials(seq.net, {oracle::Firing(seq.net.size(), 0)}, 0, {weak});
  CHECK(pot[seq.numbers.front().value] < seq.params.h);

  CountingSession cs(seq, 1);
  cs.sim().schedule(weak);
  cs.advance(4);
  for (int t = 0; t <= cs.round(); ++t) CHECK(cs.firing_numbers(t).empty());
}

TEST_CASE("set_goal") {
  const SequenceNetwork& seq = demo();
  SUBCASE("goal co-fires with its number on the goal slot") {
    CountingSession cs(seq, 1);
    cs.set_goal(4);
    cs.advance(8);
    for (int t = 1; t <= cs.round(); ++t) {
      CHECK(cs.sim().trace().fires(seq.goal, t) == (t % 2 == 1));
      CHECK(cs.sim().trace().fires(seq.goal_inputs[3], t) == (t % 2 == 1));
    }
  }
  SUBCASE("out of range") {
    CountingSession cs(seq, 1);
    CHECK(code_of([&] { cs.set_goal(25); }) == ErrorCode::GoalOutOfRange);
    CHECK(code_of([&] { cs.set_goal(0); }) == ErrorCode::GoalOutOfRange);
  }
  SUBCASE("goal one is detected right after start") {
    CountingSession cs(seq, 1);
    cs.set_goal(1);
    cs.start_count();
    const int start = cs.round();
    bool seen = false;
    for (int t = 0; t < 2 * seq.schedule.cycle(); ++t) {
      cs.advance(1);
      seen = seen || cs.detector_fires(1);
    }
    CHECK(seen);
    CHECK(cs.wm().detect_equal("current-number", "goal", cs.sim().trace(), start, cs.round()));
  }
}

TEST_CASE("increment walk-through with the reference tuple") {
  SequenceNetwork seq = bare(24);
  auto out = testing::increment_from(seq, 1);
  CHECK(out.numbers_after_excite == std::vector<int>{1, 2});
  CHECK(out.letters_after_excite == std::vector<int>{1, 2});
  CHECK(out.numbers == std::vector<int>{2});
  CHECK(out.letters == std::vector<int>{2});
}

TEST_CASE("without pulses the token stays put") {
  SequenceNetwork seq = bare(24);
  CountingSession cs(seq, 1, CountingSession::Position{5, 5});
  cs.advance(10);
  for (int t = 0; t <= 10; ++t) {
    CHECK(cs.firing_numbers(t) == std::vector<int>{5});
    CHECK(cs.firing_letters(t) == std::vector<int>{5});
  }
}

TEST_CASE("excitation alone ignites nothing in a silent chain") {
  SequenceNetwork seq = bare(24);
  CountingSession cs(seq, 1);
  cs.post_excite(0, 1);
  cs.advance(4);
  for (int t = 0; t <= 4; ++t) {
    CHECK(cs.firing_numbers(t).empty());
    CHECK(cs.firing_letters(t).empty());
  }
}

TEST_CASE("increment at the end") {
  SequenceNetwork seq = bare(4);
  CountingSession cs(seq, 1, CountingSession::Position{4, 4});
  CHECK(code_of([&] { cs.increment(); }) == ErrorCode::AtEnd);
}

TEST_CASE("increment holds for sampled grid tuples") {
  auto grid = oracle::valid_grid(-5, 5);
  REQUIRE_FALSE(grid.empty());
  std::mt19937_64 rng(7);
  std::shuffle(grid.begin(), grid.end(), rng);
  grid.resize(std::min<std::size_t>(grid.size(), 25));
  const int k = 6;
  for (const auto& t : grid) {
    SequenceNetwork seq = bare(k, testing::params_from(t));
    for (int i = 1; i < k; ++i) {
      CAPTURE(i);
      auto out = testing::increment_from(seq, i);
      CHECK(out.numbers == std::vector<int>{i + 1});
      CHECK(out.letters == std::vector<int>{i + 1});
    }
  }
}

TEST_CASE("query1 on the demo") {
  const SequenceNetwork& seq = demo();
  auto r = run_query1(seq, 4, quick());
  CHECK(r.letter_index == 4);
  CHECK(r.letter == "delta");
  CHECK(testing::modal(seq.net, r.decision) == "terrible");
  CHECK(r.increments == 3);

  auto one = run_query1(seq, 1, quick());
  CHECK(one.increments == 0);
  CHECK(one.letter == "alpha");

  CHECK(code_of([&] { run_query1(seq, 0, quick()); }) == ErrorCode::GoalOutOfRange);
  CHECK(code_of([&] { run_query1(seq, 25, quick()); }) == ErrorCode::GoalOutOfRange);
}

TEST_CASE("query2 on the demo") {
  const SequenceNetwork& seq = demo();
  auto r = run_query2(seq, "alpha", 3, quick());
  CHECK(r.letter_index == 4);
  CHECK(r.letter == "delta");
  CHECK(testing::modal(seq.net, r.decision) == "terrible");

  auto mid = run_query2(seq, "gamma", 5, quick(50));
  CHECK(mid.letter_index == 8);
  CHECK(mid.letter == seq.letter_symbols[7]);

  CHECK(code_of([&] { run_query2(seq, "omega", 1, quick()); }) == ErrorCode::GoalOutOfRange);
  CHECK(code_of([&] { run_query2(seq, "gamma", 0, quick()); }) == ErrorCode::GoalOutOfRange);
  CHECK(code_of([&] { run_query2(seq, "digamma", 1, quick()); }) == ErrorCode::UnknownLetter);
}

TEST_CASE("one token per chain and lockstep on the counting slot") {
  const SequenceNetwork& seq = demo();
  auto check = [&](int offset, const QueryResult& r, const CountingSession& cs) {
    for (int t = 2; t <= r.detection_round; ++t) {
      auto n = cs.firing_numbers(t);
      auto l = cs.firing_letters(t);
      CHECK(n.size() <= 2);
      CHECK(l.size() <= 2);
      if (t % 2 != 0) continue;
      REQUIRE(n.size() == 1);
      REQUIRE(l.size() == 1);
      CHECK(l.front() == n.front() + offset);
    }
  };
  std::unique_ptr<CountingSession> cs;
  auto q1 = run_query1(seq, 9, quick(50), nullptr, &cs);
  check(0, q1, *cs);
  auto q2 = run_query2(seq, "epsilon", 6, quick(50), nullptr, &cs);
  check(4, q2, *cs);
}

TEST_CASE("letter index is deterministic and decisions reproduce per seed") {
  const SequenceNetwork& seq = demo();
  QueryOptions a = quick(300), b = quick(300);
  b.seed = a.seed + 1;
  auto ra = run_query1(seq, 11, a);
  auto rb = run_query1(seq, 11, b);
  CHECK(ra.letter_index == rb.letter_index);
  CHECK(ra.detection_round == rb.detection_round);
  auto again = run_query1(seq, 11, a);
  CHECK(again.decision.counts == ra.decision.counts);
}

TEST_CASE("detection advances by one cycle per goal step") {
  const SequenceNetwork& seq = demo();
  const int d = seq.schedule.cycle();
  int prev = run_query1(seq, 1, quick(20)).detection_round;
  for (int g = 2; g <= 8; ++g) {
    auto r = run_query1(seq, g, quick(20));
    CHECK(r.detection_round - prev == d);
    prev = r.detection_round;
    auto b = latency_breakdown(seq, g, r);
    CHECK(b.d == d);
    CHECK(r.latency_rounds == g * b.d + b.t_iks + b.c);
  }
}
