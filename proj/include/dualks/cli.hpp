#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dualks/sequence.hpp"

namespace dualks {

inline constexpr std::uint64_t kDefaultSeed = 20240901;

struct SweepRow {
  int g = 0;
  std::string letter;
  std::string decision;  // modal decision name, empty when nothing stabilized
  double probability = 0.0;
  int detection_round = 0;
  int latency_rounds = 0;
};

// Query 1 for every g in [first, last]; an empty range gives no rows.
std::vector<SweepRow> sweep(const SequenceNetwork& seq, int first, int last,
                            const QueryOptions& opt);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Entry point of the command-line tool; returns the process exit code.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dualks
