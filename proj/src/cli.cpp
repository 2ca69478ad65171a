#include "dualks/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dualks/error.hpp"
#include "dualks/spec_io.hpp"

namespace dualks {

namespace {

struct Options {
  std::string spec;
  std::string params = "paper";
  std::string letter;
  std::string sentence;
  std::string trace;
  std::string out;
  std::string tag = "decision";
  std::vector<std::string> start;
  int goal = 0;
  int from = 1;
  int to = -1;
  int trials = 10000;
  int horizon = 32;
  std::uint64_t seed = kDefaultSeed;
  bool judge = false;
  bool emotion = false;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Config, "cannot write " + path);
  return f;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  open_out(path) << j.dump(2) << '\n';
}

void write_trace(const std::string& path, const Network& net, const Trace& trace) {
  if (path.empty()) return;
  std::ofstream f = open_out(path);
  write_trace_csv(f, net, trace);
}

std::string name_of(const Network& net, std::optional<NeuronId> id) {
  if (!id) return "none";
  const std::string& n = net.neuron(*id).name;
  return n.empty() ? "n" + std::to_string(id->value) : n;
}

void print_distribution(std::ostream& out, const Network& net, const CascadeResult& r) {
  for (const auto& [id, p] : r.distribution)
    out << "  " << name_of(net, id) << ' ' << std::fixed << std::setprecision(4) << p << '\n';
  out.unsetf(std::ios::floatfield);
}

QueryOptions query_options(const Options& o) {
  QueryOptions q;
  q.horizon = o.horizon;
  q.trials = o.trials;
  q.seed = o.seed;
  q.emotion = o.emotion;
  return q;
}

void print_query(std::ostream& out, const QueryResult& r, const Network& net) {
  out << "letter=" << r.letter << " index=" << r.letter_index
      << " decision=" << name_of(net, r.decision.mode())
      << " detection_round=" << r.detection_round << " latency_rounds=" << r.latency_rounds
      << '\n';
  print_distribution(out, net, r.decision);
  if (r.emotion) {
    out << "emotion=" << name_of(net, r.emotion->mode()) << '\n';
    print_distribution(out, net, *r.emotion);
  }
}

int run_query(const Options& o, bool second, std::ostream& out) {
  SpecFile spec = load_spec(o.spec);
  SequenceNetwork seq = spec.build_sequence();
  Trace trace;
  std::unique_ptr<CountingSession> session;
  QueryResult r = second ? run_query2(seq, o.letter, o.goal, query_options(o), &trace, &session)
                         : run_query1(seq, o.goal, query_options(o), &trace, &session);
  print_query(out, r, session->network());
  write_trace(o.trace, session->network(), trace);
  write_json(o.out, to_json(r, session->network()));
  return 0;
}

int run_validate(const Options& o, std::ostream& out) {
  CountParams p = load_params(o.params);
  auto bad = validate_params(p);
  if (bad.empty()) {
    out << "all inequalities satisfied\n";
    return 0;
  }
  out << "violated:";
  for (Inequality i : bad) out << ' ' << to_string(i);
  out << '\n';
  return exit_code_for(ErrorCode::InvalidParams);
}

int run_sweep(const Options& o, std::ostream& out) {
  SpecFile spec = load_spec(o.spec);
  SequenceNetwork seq = spec.build_sequence();
  const int last = o.to < 0 ? seq.k : o.to;
  auto rows = sweep(seq, o.from, last, query_options(o));
  if (o.out.empty()) {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream f = open_out(o.out);
    write_sweep_csv(f, rows);
  }
  return 0;
}

int run_parse(const Options& o, std::ostream& out) {
  SpecFile spec = load_spec(o.spec);
  Parser parser(spec.lexicon, o.seed);
  parser.load_templates(spec.templates);
  ReducedParse parse = parser.parse(o.sentence);
  nlohmann::json j = to_json(parse);
  out << "template=" << parse.template_id;
  for (const auto& [role, word] : parse.bindings) out << ' ' << role << '=' << word;
  out << '\n';
  if (o.judge) {
    StoryOutline outline = to_story_outline(parse, spec.iks, spec.lexicon);
    CascadeResult r = story_cascade(outline, spec.iks, o.horizon, o.trials, o.seed);
    out << "judgment=" << name_of(spec.iks.net, r.mode()) << '\n';
    print_distribution(out, spec.iks.net, r);
    j["judgment"] = to_json(r, spec.iks.net);
  }
  write_json(o.out, j);
  return 0;
}

int run_cascade_cmd(const Options& o, std::ostream& out) {
  SpecFile spec = load_spec(o.spec);
  const std::vector<std::string>& names = o.start.empty() ? spec.cascade_start : o.start;
  if (names.empty()) throw Error(ErrorCode::Config, "no start concepts (use --start)");
  std::vector<NeuronId> start;
  for (const std::string& n : names)
    for (NeuronId id : spec.iks.lookup(n)) start.push_back(id);
  auto tag = tag_from_string(o.tag);
  if (!tag) throw Error(ErrorCode::Config, "unknown output tag " + o.tag);

  const Network& net = spec.iks.net;
  FiringState init = FiringState::with_firing(net.size(), start);
  std::vector<ExternalSignal> signals = start_clamp(net, start);
  signals.insert(signals.end(), spec.signals.begin(), spec.signals.end());
  CascadeResult r =
      run_cascade(net, init, signals, net.with_tag(*tag), o.horizon, o.trials, o.seed);
  out << "mode=" << name_of(net, r.mode()) << " stabilized=" << (r.stabilized ? "yes" : "no")
      << '\n';
  print_distribution(out, net, r);
  if (!o.trace.empty()) write_trace(o.trace, net, run(net, init, signals, o.horizon, o.seed));
  write_json(o.out, to_json(r, net));
  return 0;
}

}  // namespace

std::vector<SweepRow> sweep(const SequenceNetwork& seq, int first, int last,
                            const QueryOptions& opt) {
  std::vector<SweepRow> rows;
  for (int g = first; g <= last; ++g) {
    std::unique_ptr<CountingSession> session;
    QueryResult r = run_query1(seq, g, opt, nullptr, &session);
    SweepRow row;
    row.g = g;
    row.letter = r.letter;
    if (auto m = r.decision.mode()) {
      row.decision = session->network().neuron(*m).name;
      row.probability = r.decision.probability(*m);
    }
    row.detection_round = r.detection_round;
    row.latency_rounds = r.latency_rounds;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "g,letter,decision,probability,detection_round,latency_rounds\n";
  for (const SweepRow& r : rows)
    out << r.g << ',' << r.letter << ',' << r.decision << ',' << std::fixed
        << std::setprecision(4) << r.probability << std::defaultfloat << ','
        << r.detection_round << ',' << r.latency_rounds << '\n';
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dual knowledge structure simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--trials", o.trials, "cascade trials")->capture_default_str();
    sub->add_option("--horizon", o.horizon, "cascade rounds")->capture_default_str();
    sub->add_option("--out", o.out, "output file");
  };

  CLI::App* q1 = app.add_subcommand("query1", "letter at position g and its assessment");
  q1->add_option("--spec", o.spec)->required();
  q1->add_option("--goal", o.goal)->required();
  q1->add_option("--trace", o.trace, "trace CSV");
  q1->add_flag("--emotion", o.emotion, "also run the emotion cascade");
  common(q1);

  CLI::App* q2 = app.add_subcommand("query2", "letter g positions after --letter");
  q2->add_option("--spec", o.spec)->required();
  q2->add_option("--letter", o.letter)->required();
  q2->add_option("--goal", o.goal)->required();
  q2->add_option("--trace", o.trace, "trace CSV");
  q2->add_flag("--emotion", o.emotion, "also run the emotion cascade");
  common(q2);

  CLI::App* parse = app.add_subcommand("parse", "parse a sentence");
  parse->add_option("--spec", o.spec)->required();
  parse->add_option("--sentence", o.sentence)->required();
  parse->add_flag("--judge", o.judge, "run the story cascade");
  common(parse);

  CLI::App* sw = app.add_subcommand("sweep", "query 1 over a goal range, CSV");
  sw->add_option("--spec", o.spec)->required();
  sw->add_option("--from", o.from)->capture_default_str();
  sw->add_option("--to", o.to, "last goal (default k)");
  common(sw);

  CLI::App* val = app.add_subcommand("validate", "check counting parameters");
  val->add_option("--params", o.params, "paper or a JSON file")->capture_default_str();

  CLI::App* cas = app.add_subcommand("cascade", "IKS cascade from start concepts");
  cas->add_option("--spec", o.spec)->required();
  cas->add_option("--start", o.start, "start concepts");
  cas->add_option("--tag", o.tag, "output tag")->capture_default_str();
  cas->add_option("--trace", o.trace, "trace CSV of one run");
  common(cas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? 0 : exit_code_for(ErrorCode::Config);
  }

  try {
    if (o.trials < 1 || o.horizon < 1)
      throw Error(ErrorCode::Config, "trials and horizon must be positive");
    if (*q1) return run_query(o, false, out);
    if (*q2) return run_query(o, true, out);
    if (*parse) return run_parse(o, out);
    if (*sw) return run_sweep(o, out);
    if (*val) return run_validate(o, out);
    if (*cas) return run_cascade_cmd(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(ErrorCode::Config);
  }
  return exit_code_for(ErrorCode::Config);
}

}  // namespace dualks
