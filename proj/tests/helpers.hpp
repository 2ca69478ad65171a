#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dualks/error.hpp"
#include "dualks/iks.hpp"
#include "dualks/sequence.hpp"

namespace testing {

template <class F>
std::optional<dualks::ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const dualks::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

// Name of the most frequent output of a cascade.
inline std::string modal(const dualks::Network& net, const dualks::CascadeResult& r) {
  dualks::NeuronId best{};
  double p = -1.0;
  for (const auto& [id, q] : r.distribution)
    if (q > p) {
      p = q;
      best = id;
    }
  return p < 0 ? std::string() : net.neuron(best).name;
}

inline double probability_of(const dualks::Network& net, const dualks::CascadeResult& r,
                             const std::string& name) {
  for (const auto& [id, q] : r.distribution)
    if (net.neuron(id).name == name) return q;
  return 0.0;
}

inline dualks::CountParams params_from(const std::array<int, 7>& t) {
  dualks::CountParams p;
  p.h = t[0];
  p.cur = t[1];
  p.l = t[2];
  p.s = t[3];
  p.s_resid = t[4];
  p.exc = t[5];
  p.inh = t[6];
  return p;
}

// One increment from {current roles, rep(i), rep(s_i)}: the chain neurons
// firing after the excite pulse and at the end of the cycle.
struct IncrementOutcome {
  std::vector<int> numbers_after_excite, letters_after_excite;
  std::vector<int> numbers, letters;
};

inline IncrementOutcome increment_from(const dualks::SequenceNetwork& seq, int i) {
  dualks::CountingSession cs(seq, 1, dualks::CountingSession::Position{i, i});
  const int r0 = cs.round();
  cs.increment();
  const int excited = r0 + seq.schedule.excite_at + 1;
  return {cs.firing_numbers(excited), cs.firing_letters(excited),
          cs.firing_numbers(cs.round()), cs.firing_letters(cs.round())};
}

}  // namespace testing
