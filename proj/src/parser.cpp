#include "dualks/parser.hpp"

#include <algorithm>
#include <sstream>

#include "dualks/error.hpp"

namespace dualks {

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "noun";
    case Pos::TransitiveVerb: return "transitive-verb";
    case Pos::IntransitiveVerb: return "intransitive-verb";
  }
  return "?";
}

Pos pos_from_string(std::string_view name) {
  for (Pos p : {Pos::Noun, Pos::TransitiveVerb, Pos::IntransitiveVerb})
    if (to_string(p) == name) return p;
  throw Error(ErrorCode::Config, "unknown part of speech: " + std::string(name));
}

std::set<Pos> parse_pos_list(std::string_view list) {
  std::set<Pos> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.insert(pos_from_string(item));
    start = end + 1;
  }
  return out;
}

std::string format_pos_list(const std::set<Pos>& pos) {
  std::string out;
  for (Pos p : pos) {
    if (!out.empty()) out += ",";
    out += to_string(p);
  }
  return out;
}

std::vector<std::string> Template::order() const {
  if (language_order) return *language_order;
  std::vector<std::string> out;
  for (const RoleSpec& r : roles) out.push_back(r.name);
  return out;
}

const RoleSpec& Template::role(const std::string& name) const {
  for (const RoleSpec& r : roles)
    if (r.name == name) return r;
  throw Error(ErrorCode::Config, "template " + id + " has no role " + name);
}

Word word_from_lexicon(const Lexicon& lex, const std::string& surface) {
  const LexiconEntry& e = lex.lookup(surface);
  auto it = e.attributes.find("pos");
  if (it == e.attributes.end() || it->second.empty())
    throw Error(ErrorCode::Config, "word without part of speech: " + surface);
  return Word{surface, parse_pos_list(it->second)};
}

Parser::Parser(const Lexicon& lex, std::uint64_t seed) : lex_(lex), seed_(seed) {
  load_templates({});
}

void Parser::load_templates(const std::vector<Template>& templates) {
  std::set<std::string> ids;
  std::vector<std::string> role_names;
  for (const Template& t : templates) {
    if (!ids.insert(t.id).second) throw Error(ErrorCode::DuplicateTemplate, t.id);
    if (t.roles.empty()) throw Error(ErrorCode::Config, "template " + t.id + " has no roles");
    std::set<std::string> names;
    for (const RoleSpec& r : t.roles) {
      if (!names.insert(r.name).second)
        throw Error(ErrorCode::Config, "template " + t.id + " repeats role " + r.name);
      if (std::find(role_names.begin(), role_names.end(), r.name) == role_names.end())
        role_names.push_back(r.name);
    }
    if (t.language_order) {
      std::set<std::string> order(t.language_order->begin(), t.language_order->end());
      if (order != names || t.language_order->size() != names.size())
        throw Error(ErrorCode::Config, "language order of " + t.id + " is not a permutation");
    }
  }

  templates_ = templates;
  wm_.reset();
  sim_.reset();
  net_ = lex_.network();
  role_neurons_.clear();
  for (const std::string& name : role_names)
    role_neurons_[name] = WorkingMemory::make_role_neuron(net_, "role:" + name);

  std::vector<NeuronId> pool;
  for (const auto& [symbol, e] : lex_.entries()) pool.push_back(e.partner);
  sim_ = std::make_unique<Simulation>(net_, FiringState::silent(net_.size()), seed_);
  const int period = std::max<int>(1, static_cast<int>(role_names.size()));
  wm_ = std::make_unique<WorkingMemory>(*sim_, AlternationConfig{period, 2});
  for (std::size_t i = 0; i < role_names.size(); ++i)
    wm_->add_role(RoleNeuron{role_neurons_[role_names[i]], role_names[i], static_cast<int>(i), pool});
  candidates_ = {};
  open_ = false;
}

const Template& Parser::find_template(const std::string& id) const {
  for (const Template& t : templates_)
    if (t.id == id) return t;
  throw Error(ErrorCode::Config, "unknown template " + id);
}

void Parser::reset_memory() {
  for (const RoleNeuron& r : wm_->roles()) wm_->release(r.name);
}

void Parser::new_sentence() {
  if (templates_.empty()) throw Error(ErrorCode::NoTemplate, "template store is empty");
  if (open_) reset_memory();
  candidates_.alive.clear();
  for (const Template& t : templates_) candidates_.alive.push_back(Candidate{t.id, {}});
  open_ = true;
}

const CandidateSet& Parser::ingest_word(const Word& word) {
  if (templates_.empty()) throw Error(ErrorCode::NoTemplate, "template store is empty");
  if (!open_) new_sentence();

  std::vector<Candidate> next;
  std::vector<std::string> assigned_roles;
  for (const Candidate& c : candidates_.alive) {
    const Template& t = find_template(c.template_id);
    std::optional<std::string> role;
    for (const std::string& name : t.order()) {
      if (!c.assignment.count(name)) {
        role = name;
        break;
      }
    }
    if (!role) continue;
    const std::set<Pos>& allowed = t.role(*role).allowed;
    bool fits = std::any_of(word.pos.begin(), word.pos.end(),
                            [&](Pos p) { return allowed.count(p) != 0; });
    if (!fits) continue;
    Candidate extended = c;
    extended.assignment[*role] = word.surface;
    next.push_back(std::move(extended));
    if (std::find(assigned_roles.begin(), assigned_roles.end(), *role) == assigned_roles.end())
      assigned_roles.push_back(*role);
  }

  if (next.empty()) {
    reset_memory();
    candidates_.alive.clear();
    open_ = false;
    throw Error(ErrorCode::NoCandidates, "no structure accepts \"" + word.surface + "\"");
  }
  candidates_.alive = std::move(next);

  if (lex_.contains(word.surface)) {
    NeuronId symbol = lex_.lookup(word.surface).partner;
    for (const std::string& role : assigned_roles)
      if (!wm_->binding(role)) wm_->bind(role, symbol);
  }
  const AlternationConfig& cfg = wm_->config();
  wm_->advance(cfg.window * cfg.period);
  return candidates_;
}

const CandidateSet& Parser::ingest(const std::string& surface) {
  return ingest_word(word_from_lexicon(lex_, surface));
}

ReducedParse Parser::end_sentence() {
  if (!open_) throw Error(ErrorCode::Incomplete, "no sentence open");
  std::vector<const Candidate*> complete;
  for (const Candidate& c : candidates_.alive)
    if (static_cast<int>(c.assignment.size()) == find_template(c.template_id).arity())
      complete.push_back(&c);
  reset_memory();
  open_ = false;
  if (complete.size() > 1) throw Error(ErrorCode::Ambiguous, "more than one structure complete");
  if (complete.empty()) throw Error(ErrorCode::Incomplete, "no structure complete");
  return ReducedParse{complete.front()->template_id, complete.front()->assignment};
}

ReducedParse Parser::parse(std::string_view sentence) {
  new_sentence();
  std::istringstream in{std::string(sentence)};
  std::string w;
  while (in >> w) ingest(w);
  return end_sentence();
}

StoryOutline to_story_outline(const ReducedParse& parse, ConceptGraph& iks, const Lexicon& lex) {
  StoryOutline out;
  std::vector<NeuronId> pattern;
  std::string name = "story:" + parse.template_id;
  for (const auto& [role, word] : parse.bindings) {
    const LexiconEntry& e = lex.lookup(word);
    auto it = e.attributes.find("concept");
    if (it == e.attributes.end()) throw Error(ErrorCode::UnknownConcept, "no concept for " + word);
    NeuronId c = iks.representative(it->second);
    out.constituents[role] = c;
    pattern.push_back(c);
    name += ":" + word;
  }
  LearningConfig cfg;
  cfg.wta_policy = WtaPolicy::FirstUnused;
  try {
    out.story = learn_concept(iks, name, pattern, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoFreeNeuron) throw;
    iks.net.add_neuron(NeuronSpec::threshold_gate(1.0));
    out.story = learn_concept(iks, name, pattern, cfg);
  }
  return out;
}

CascadeResult story_cascade(const StoryOutline& outline, const ConceptGraph& iks, int horizon,
                            int trials, std::uint64_t seed) {
  std::vector<NeuronId> start;
  for (const auto& [role, id] : outline.constituents) start.push_back(id);
  return cascade(iks, start, horizon, trials, seed, Tag::Decision);
}

}  // namespace dualks
