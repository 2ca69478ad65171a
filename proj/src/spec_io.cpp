#include "dualks/spec_io.hpp"

#include <fstream>

#include "dualks/error.hpp"

namespace dualks {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Config, what); }

NeuronId resolve(const Network& net, const json& ref) {
  if (ref.is_number_integer()) {
    auto v = ref.get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= net.size())
      throw Error(ErrorCode::UnknownNeuron, "neuron index " + std::to_string(v));
    return NeuronId{static_cast<std::uint32_t>(v)};
  }
  if (ref.is_string()) {
    auto id = net.find(ref.get<std::string>());
    if (!id) throw Error(ErrorCode::UnknownNeuron, "neuron " + ref.get<std::string>());
    return *id;
  }
  bad("neuron reference must be an index or a name");
}

Tag tag_of(const std::string& name) {
  auto t = tag_from_string(name);
  if (!t) bad("unknown tag " + name);
  return *t;
}

NeuronSpec neuron_from_json(const json& j) {
  NeuronSpec n;
  const std::string kind = j.value("kind", "threshold");
  if (kind == "threshold") {
    n.kind = NeuronKind::Threshold;
  } else if (kind == "sigmoid") {
    n.kind = NeuronKind::Sigmoid;
  } else {
    bad("unknown neuron kind " + kind);
  }
  if (!j.contains("threshold")) bad("neuron without threshold");
  n.threshold = j.at("threshold").get<double>();
  n.steepness = j.value("steepness", 1.0);
  n.failure_prob = j.value("failure_prob", 0.0);
  n.name = j.value("name", "");
  for (const auto& t : j.value("tags", json::array())) n.tags.insert(tag_of(t.get<std::string>()));
  return n;
}

ExternalSignal signal_from_json(const Network& net, const json& j) {
  ExternalSignal s;
  for (const auto& t : j.value("targets", json::array())) s.targets.push_back(resolve(net, t));
  if (j.contains("tag")) s.tag = tag_of(j.at("tag").get<std::string>());
  s.weight = j.value("weight", 0.0);
  s.start_round = j.value("start_round", 0);
  s.duration = j.value("duration", 1);
  s.label = j.value("label", "");
  if (s.duration < 1) bad("signal duration must be >= 1");
  return s;
}

PulseSchedule schedule_from_json(const json& j) {
  PulseSchedule ps;
  ps.excite_at = j.value("excite_at", ps.excite_at);
  ps.excite_duration = j.value("excite_duration", ps.excite_duration);
  ps.inhibit_at = j.value("inhibit_at", ps.inhibit_at);
  ps.inhibit_duration = j.value("inhibit_duration", ps.inhibit_duration);
  ps.rest = j.value("rest", ps.rest);
  ps.validate();
  return ps;
}

Template template_from_json(const json& j) {
  Template t;
  t.id = j.at("id").get<std::string>();
  for (const auto& r : j.at("roles")) {
    RoleSpec role;
    role.name = r.at("name").get<std::string>();
    for (const auto& p : r.at("pos")) role.allowed.insert(pos_from_string(p.get<std::string>()));
    t.roles.push_back(std::move(role));
  }
  if (j.contains("language_order"))
    t.language_order = j.at("language_order").get<std::vector<std::string>>();
  return t;
}

std::string name_or_index(const Network& net, NeuronId id) {
  const std::string& n = net.neuron(id).name;
  return n.empty() ? "n" + std::to_string(id.value) : n;
}

}  // namespace

SequenceNetwork SpecFile::build_sequence() const {
  if (!sequence) bad("spec has no sequence section");
  const SequenceSection& s = *sequence;
  return build_sequence_network(static_cast<int>(s.spec.letters.size()), s.params, iks, s.spec,
                                s.schedule);
}

CountParams params_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "paper") bad("unknown parameter preset " + j.get<std::string>());
    return CountParams::reference();
  }
  CountParams p;
  for (const char* key : {"h", "cur", "l", "s", "s_resid", "exc", "inh"})
    if (!j.contains(key)) bad(std::string("parameter ") + key + " missing");
  p.h = j.at("h").get<double>();
  p.cur = j.at("cur").get<double>();
  p.l = j.at("l").get<double>();
  p.s = j.at("s").get<double>();
  p.s_resid = j.at("s_resid").get<double>();
  p.exc = j.at("exc").get<double>();
  p.inh = j.at("inh").get<double>();
  return p;
}

json to_json(const CountParams& p) {
  return json{{"h", p.h},   {"cur", p.cur},         {"l", p.l},     {"s", p.s},
              {"s_resid", p.s_resid}, {"exc", p.exc}, {"inh", p.inh}};
}

CountParams load_params(const std::string& source) {
  if (source == "paper") return CountParams::reference();
  std::ifstream in(source);
  if (!in) bad("cannot open parameter file " + source);
  try {
    return params_from_json(json::parse(in));
  } catch (const json::exception& e) {
    bad(source + ": " + e.what());
  }
}

SpecFile parse_spec(const json& doc) {
  if (!doc.is_object()) bad("spec must be a JSON object");
  SpecFile out;
  try {
    Network& net = out.iks.net;
    for (const auto& n : doc.value("neurons", json::array())) net.add_neuron(neuron_from_json(n));
    for (const auto& e : doc.value("edges", json::array()))
      net.add_edge(resolve(net, e.at("src")), resolve(net, e.at("dst")),
                   e.at("weight").get<double>(), e.value("label", ""));
    if (doc.contains("residual")) {
      const json& r = doc.at("residual");
      net.residual().enabled = r.value("enabled", false);
      net.residual().magnitude_fraction = r.value("magnitude_fraction", 0.0);
      net.residual().window = r.value("window", 1);
      if (net.residual().window < 0) bad("residual window must be >= 0");
    }
    for (const auto& s : doc.value("signals", json::array()))
      out.signals.push_back(signal_from_json(net, s));

    if (doc.contains("concepts")) {
      for (const auto& [name, refs] : doc.at("concepts").items()) {
        if (refs.is_array()) {
          for (const auto& r : refs) out.iks.add_concept(name, resolve(net, r));
        } else {
          out.iks.add_concept(name, resolve(net, refs));
        }
      }
    } else {
      for (NeuronId id : net.with_tag(Tag::Concept))
        if (!net.neuron(id).name.empty()) out.iks.add_concept(net.neuron(id).name, id);
    }
    out.cascade_start = doc.value("cascade_start", std::vector<std::string>{});

    if (doc.contains("sequence")) {
      const json& s = doc.at("sequence");
      SequenceSection sec;
      sec.params = params_from_json(s.value("params", json("paper")));
      sec.schedule = schedule_from_json(s.value("schedule", json::object()));
      sec.spec.letters = s.at("letters").get<std::vector<std::string>>();
      sec.spec.concepts = s.value("concepts", std::vector<std::string>{});
      out.sequence = std::move(sec);
    }

    for (const auto& e : doc.value("lexicon", json::array())) {
      std::map<std::string, std::string> attrs;
      const json attributes = e.value("attributes", json::object());
      for (const auto& [k, v] : attributes.items())
        attrs[k] = v.is_string() ? v.get<std::string>() : v.dump();
      out.lexicon.add_symbol(e.at("symbol").get<std::string>(), std::move(attrs));
    }
    for (const auto& t : doc.value("templates", json::array()))
      out.templates.push_back(template_from_json(t));
  } catch (const json::exception& e) {
    bad(std::string("malformed spec: ") + e.what());
  }
  return out;
}

SpecFile load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open spec " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_spec(doc);
}

json to_json(const CascadeResult& r, const Network& net) {
  json dist = json::object();
  json counts = json::object();
  for (const auto& [id, p] : r.distribution) dist[name_or_index(net, id)] = p;
  for (const auto& [id, c] : r.counts) counts[name_or_index(net, id)] = c;
  json out{{"distribution", dist}, {"counts", counts},   {"stabilized", r.stabilized},
           {"trials", r.trials},   {"seed", r.seed}};
  out["stabilization_round"] =
      r.stabilization_round ? json(*r.stabilization_round) : json(nullptr);
  auto m = r.mode();
  out["mode"] = m ? json(name_or_index(net, *m)) : json(nullptr);
  return out;
}

json to_json(const ReducedParse& p) {
  return json{{"template", p.template_id}, {"bindings", p.bindings}};
}

json to_json(const QueryResult& r, const Network& net) {
  json out{{"letter_index", r.letter_index},     {"letter", r.letter},
           {"decision", to_json(r.decision, net)}, {"detection_round", r.detection_round},
           {"latency_rounds", r.latency_rounds},   {"increments", r.increments}};
  if (r.emotion) out["emotion"] = to_json(*r.emotion, net);
  return out;
}

}  // namespace dualks
