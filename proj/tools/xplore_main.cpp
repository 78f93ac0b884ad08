#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "xplore/errors.hpp"
#include "xplore/grammar.hpp"
#include "xplore/ingest.hpp"
#include "xplore/interpreter.hpp"
#include "xplore/presets.hpp"
#include "xplore/report_json.hpp"
#include "xplore/service.hpp"

using namespace xplore;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// "publications", "citations[:seed[:scale]]" or a triple file.
std::shared_ptr<const Dataset> open_dataset(const std::string& spec) {
  if (spec == "publications") return std::make_shared<const Dataset>(publications_dataset());
  if (spec.rfind("citations", 0) == 0) {
    std::uint64_t seed = 1;
    std::size_t scale = 200;
    std::istringstream in(spec.substr(9));
    char colon = 0;
    if (in >> colon && colon == ':') in >> seed;
    if (in >> colon && colon == ':') in >> scale;
    return std::make_shared<const Dataset>(build_citation_fixture(seed, scale).dataset);
  }
  return std::make_shared<const Dataset>(load_triples_file(spec));
}

Grammar open_grammar(const std::string& spec) {
  for (const auto& p : grammar_presets())
    if (p.name == spec || p.version == spec) return p.grammar();
  return Grammar::parse(read_file(spec));
}

TacticalProfile open_profile(const std::string& spec) {
  for (const auto& p : profile_presets())
    if (p.name == spec) return p.profile();
  return TacticalProfile::parse(read_file(spec));
}

void print_set(const Session& s, const Input& in, const std::string& name) {
  const auto& set = s.resolve(in);
  std::cout << name << " = " << to_string(set) << "\n";
}

void print_trail(const Session& s) {
  auto t = s.trail();
  for (const auto& n : t.nodes) std::cout << n.id << (n.derived ? "* " : "  ") << n.intention << "\n";
  for (const auto& [from, to] : t.edges) std::cout << "  " << from << " -> " << to << "\n";
}

int repl(const std::shared_ptr<const Dataset>& d) {
  Session session(d);
  Interpreter interp(session);
  std::string line;
  std::cout << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    if (line == ":quit" || line == ":q") break;
    try {
      if (line == ":trail") {
        print_trail(session);
      } else if (line == ":save") {
        std::cout << session.save();
      } else if (!line.empty()) {
        auto r = interp.run(line);
        for (const auto& id : r.created) std::cout << id << " = " << session.state(id).intention_text << "\n";
        if (r.last) print_set(session, *r.last, input_name(*r.last));
      }
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << "\n";
    }
    std::cout << "> " << std::flush;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xplore: exploration operations over item/relation datasets"};
  app.require_subcommand(1);

  std::string dataset_spec, script_path, grammar_spec, expr, a_spec, b_spec, out_path, host = "127.0.0.1";
  std::vector<std::string> show;
  std::size_t depth = 4, scale = 200;
  std::uint64_t seed = 1;
  int port = 8080;
  bool as_json = false;

  auto* load = app.add_subcommand("load", "Validate a triple file and print its fingerprint");
  load->add_option("file", dataset_spec, "Triple file")->required();

  auto* schema = app.add_subcommand("schema", "Print the schema summary of a dataset");
  schema->add_option("-d,--dataset", dataset_spec, "Triple file, publications or citations[:seed[:scale]]")
      ->required();
  schema->add_flag("--json", as_json, "Structured output");

  auto* eval = app.add_subcommand("eval", "Run a script and print the final state");
  eval->add_option("-d,--dataset", dataset_spec, "Triple file, publications or citations[:seed[:scale]]")
      ->required();
  eval->add_option("-f,--file", script_path, "Script file")->required();
  eval->add_option("--show", show, "Also print these names or states");
  eval->add_option("--save", out_path, "Write the session script here");

  auto* rep = app.add_subcommand("repl", "Interactive statements (:trail, :save, :quit)");
  rep->add_option("-d,--dataset", dataset_spec, "Triple file, publications or citations[:seed[:scale]]")
      ->required();

  auto* grammar = app.add_subcommand("grammar", "Strategy grammar analysis");
  grammar->require_subcommand(1);
  auto* check = grammar->add_subcommand("check", "Accept or reject an expression");
  check->add_option("--grammar", grammar_spec, "Preset name, v1..v4 or grammar file")->required();
  check->add_option("--expr", expr, "Expression text")->required();
  check->add_flag("--json", as_json, "Structured output");
  auto* compare = grammar->add_subcommand("compare", "Compare two grammars by enumeration");
  compare->add_option("--a", a_spec, "Preset or grammar file")->required();
  compare->add_option("--b", b_spec, "Preset or grammar file")->required();
  compare->add_option("--depth", depth, "Maximum nesting depth");
  compare->add_flag("--json", as_json, "Structured output");
  auto* presets = grammar->add_subcommand("presets", "List built-in grammars");

  auto* profile = app.add_subcommand("profile", "Tactical profile comparison");
  profile->require_subcommand(1);
  auto* pcompare = profile->add_subcommand("compare", "Compare two tactical profiles");
  pcompare->add_option("--a", a_spec, "Preset or profile file")->required();
  pcompare->add_option("--b", b_spec, "Preset or profile file")->required();
  pcompare->add_flag("--json", as_json, "Structured output");

  auto* fixture = app.add_subcommand("fixture", "Write the synthetic citation dataset");
  fixture->add_option("--seed", seed, "Generator seed");
  fixture->add_option("--scale", scale, "Number of publications")->check(CLI::Range(50, 5000));
  fixture->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 JSON API");
  serve->add_option("-d,--dataset", dataset_spec, "Triple file, publications or citations[:seed[:scale]]")
      ->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*load) {
      auto d = open_dataset(dataset_spec);
      std::cout << dataset_fingerprint(*d) << "\t" << d->item_count() << " items\t" << d->relations().size()
                << " relations\n";
    } else if (*schema) {
      auto s = schema_summary(*open_dataset(dataset_spec));
      std::cout << (as_json ? report_json(s) + "\n" : s.to_string());
    } else if (*eval) {
      auto d = open_dataset(dataset_spec);
      Session session(d);
      Interpreter interp(session);
      auto r = interp.run(read_file(script_path));
      for (const auto& name : show) {
        auto bound = session.binding(name);
        if (bound) print_set(session, *bound, name);
        else if (session.has_state(name)) print_set(session, StateId(name), name);
        else throw SessionError("unknown name '" + name + "'");
      }
      if (r.last) print_set(session, *r.last, input_name(*r.last));
      if (!out_path.empty()) std::ofstream(out_path) << session.save();
    } else if (*rep) {
      return repl(open_dataset(dataset_spec));
    } else if (*check) {
      auto g = open_grammar(grammar_spec);
      auto sk = skeleton_of(expr);
      auto der = derive(g, sk);
      if (as_json) {
        std::cout << report_json(sk, der) << "\n";
      } else {
        std::cout << (der.accepted ? "accept" : "reject") << "\t" << sk.to_string() << "\n";
        for (const auto& step : der.steps) std::cout << "  " << step << "\n";
        for (const auto& finding : Grammar::lint(sk)) std::cout << "lint: " << finding << "\n";
      }
      return der.accepted ? 0 : 2;
    } else if (*compare) {
      auto c = compare_grammars(open_grammar(a_spec), open_grammar(b_spec), depth);
      std::cout << (as_json ? report_json(c) + "\n" : c.to_string());
    } else if (*presets) {
      for (const auto& p : grammar_presets())
        std::cout << p.name << (p.version.empty() ? "" : " (" + p.version + ")") << "\t" << p.tools << "\n"
                  << p.text;
    } else if (*pcompare) {
      auto c = compare_profiles(open_profile(a_spec), open_profile(b_spec));
      std::cout << (as_json ? report_json(c) + "\n" : c.to_string());
    } else if (*fixture) {
      auto text = serialize_triples(build_citation_fixture(seed, scale).dataset);
      if (out_path.empty()) std::cout << text;
      else std::ofstream(out_path) << text;
    } else if (*serve) {
      Service service;
      service.add_dataset("default", open_dataset(dataset_spec));
      int bound = service.bind(host, port);
      if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "listening on http://" << host << ":" << bound << "/v1\n";
      return service.listen() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
