#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dualks/iks.hpp"
#include "dualks/lexicon.hpp"
#include "dualks/parser.hpp"
#include "dualks/sequence.hpp"

namespace dualks {

struct SequenceSection {
  CountParams params;
  PulseSchedule schedule;
  SequenceSpec spec;
};

// Everything a spec file can describe. Neuron references inside the file may
// be indices or neuron names.
struct SpecFile {
  ConceptGraph iks;
  std::vector<ExternalSignal> signals;
  std::vector<std::string> cascade_start;
  std::optional<SequenceSection> sequence;
  Lexicon lexicon;
  std::vector<Template> templates;

  SequenceNetwork build_sequence() const;
};

SpecFile parse_spec(const nlohmann::json& doc);
SpecFile load_spec(const std::filesystem::path& path);

CountParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CountParams& p);
// "paper" (the built-in reference tuple) or a path to a JSON object with h, cur, l, s, s_resid, exc, inh.
CountParams load_params(const std::string& source);

nlohmann::json to_json(const CascadeResult& r, const Network& net);
nlohmann::json to_json(const ReducedParse& p);
nlohmann::json to_json(const QueryResult& r, const Network& net);

}  // namespace dualks
