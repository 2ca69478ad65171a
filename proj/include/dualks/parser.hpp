#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dualks/iks.hpp"
#include "dualks/lexicon.hpp"
#include "dualks/network.hpp"
#include "dualks/simulator.hpp"
#include "dualks/working_memory.hpp"

namespace dualks {

enum class Pos { Noun, TransitiveVerb, IntransitiveVerb };

std::string_view to_string(Pos pos);
Pos pos_from_string(std::string_view name);
// Comma separated, e.g. "transitive-verb,intransitive-verb".
std::set<Pos> parse_pos_list(std::string_view list);
std::string format_pos_list(const std::set<Pos>& pos);

struct RoleSpec {
  std::string name;
  std::set<Pos> allowed;
};

struct Template {
  std::string id;
  std::vector<RoleSpec> roles;  // unordered
  std::optional<std::vector<std::string>> language_order;

  int arity() const { return static_cast<int>(roles.size()); }
  // language_order if present, otherwise the roles as listed.
  std::vector<std::string> order() const;
  const RoleSpec& role(const std::string& name) const;
};

struct Word {
  std::string surface;
  std::set<Pos> pos;
};

// Reads a word's parts of speech from its lexicon entry ("pos" attribute).
Word word_from_lexicon(const Lexicon& lex, const std::string& surface);

struct Candidate {
  std::string template_id;
  std::map<std::string, std::string> assignment;  // role -> word

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateSet {
  std::vector<Candidate> alive;

  std::size_t size() const { return alive.size(); }
};

struct ReducedParse {
  std::string template_id;
  std::map<std::string, std::string> bindings;

  friend bool operator==(const ReducedParse&, const ReducedParse&) = default;
};

struct StoryOutline {
  NeuronId story;
  std::map<std::string, NeuronId> constituents;  // role -> IKS concept
};

class Parser {
 public:
  explicit Parser(const Lexicon& lex, std::uint64_t seed = 0);
  Parser(const Parser&) = delete;
  Parser& operator=(const Parser&) = delete;

  void load_templates(const std::vector<Template>& templates);
  const std::vector<Template>& templates() const { return templates_; }

  void new_sentence();
  bool sentence_open() const { return open_; }
  const CandidateSet& ingest_word(const Word& word);
  const CandidateSet& ingest(const std::string& surface);
  ReducedParse end_sentence();
  // Whitespace-separated words, start to end.
  ReducedParse parse(std::string_view sentence);

  const CandidateSet& candidates() const { return candidates_; }
  const Simulation& sim() const { return *sim_; }
  const WorkingMemory& wm() const { return *wm_; }

 private:
  const Template& find_template(const std::string& id) const;
  void reset_memory();

  const Lexicon& lex_;
  std::uint64_t seed_;
  Network net_;
  std::unique_ptr<Simulation> sim_;
  std::unique_ptr<WorkingMemory> wm_;
  std::vector<Template> templates_;
  std::map<std::string, NeuronId> role_neurons_;
  CandidateSet candidates_;
  bool open_ = false;
};

StoryOutline to_story_outline(const ReducedParse& parse, ConceptGraph& iks, const Lexicon& lex);

CascadeResult story_cascade(const StoryOutline& outline, const ConceptGraph& iks, int horizon,
                            int trials, std::uint64_t seed);

}  // namespace dualks
