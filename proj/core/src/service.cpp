#include "xplore/service.hpp"

#include <charconv>

#include <httplib.h>

#include "json_render.hpp"
#include "xplore/errors.hpp"
#include "xplore/presets.hpp"

namespace xplore {

using nlohmann::json;

struct Service::Server {
  httplib::Server http;
};

namespace {

Response reply(int status, const json& body) { return {status, body.dump()}; }

Response error(int status, const std::string& message) { return reply(status, {{"error", message}}); }

json error_entry(const std::exception& e) {
  json j{{"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["message"] = pe->message();
    j["line"] = pe->line();
    j["column"] = pe->column();
    j["expected"] = pe->expected();
    j["kind"] = "parse";
  } else if (auto* ee = dynamic_cast<const EvalError*>(&e)) {
    if (ee->line() > 0) {
      j["line"] = ee->line();
      j["column"] = ee->column();
    }
    j["kind"] = "eval";
  } else if (auto* re = dynamic_cast<const ResolutionError*>(&e)) {
    if (re->line() > 0) {
      j["line"] = re->line();
      j["column"] = re->column();
    }
    j["kind"] = "resolution";
  } else if (dynamic_cast<const SessionError*>(&e)) {
    j["kind"] = "session";
  } else {
    j["kind"] = "error";
  }
  return j;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > pos) out.emplace_back(path.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return out;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("request body must be a JSON object");
  return j;
}

std::string field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::size_t number_param(const std::map<std::string, std::string>& q, const char* key, std::size_t fallback) {
  auto it = q.find(key);
  if (it == q.end()) return fallback;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc{} || ptr != it->second.data() + it->second.size())
    throw std::invalid_argument(std::string("query parameter '") + key + "' must be a non-negative integer");
  return v;
}

Grammar grammar_arg(const std::string& text) {
  for (const auto& p : grammar_presets())
    if (p.name == text || p.version == text) return p.grammar();
  return Grammar::parse(text);
}

TacticalProfile profile_arg(const std::string& text) {
  for (const auto& p : profile_presets())
    if (p.name == text) return p.profile();
  return TacticalProfile::parse(text);
}

json operators_manifest() {
  struct Op {
    const char* name;
    const char* signature;
  };
  static const Op ops[] = {
      {"pivot", "pivot(in, :path)"},
      {"refine", "refine(in, predicate...) | refine(in, pattern=pattern(predicate...))"},
      {"group", "group(in, :path, [level], ungrouped=true|false)"},
      {"rank", "rank(in, [level], score, missing=number)"},
      {"slice", "slice(in, first, last) | call[first..last]"},
      {"correlate", "correlate(a, b, [maxLength], undirected=true|false, pattern=pattern(...))"},
      {"thmap", "thmap(in, [level], transform)"},
      {"ahmap", "ahmap(in, [level], count|sum|mean)"},
      {"chmap", "chmap(in, [level], product|sum, select=all|tuple(...)|tuples(...), arity=n)"},
      {"tvmap", "tvmap(in, identity|via(:path))"},
      {"avmap", "avmap(in, length|span)"},
      {"cvmap", "cvmap(in, endpoints|length)"},
      {"unite", "unite(a, b)"},
      {"intersect", "intersect(a, b)"},
      {"diff", "diff(a, b)"},
      {"branch", "branch(in, expr1, expr2)"},
      {"register", "register(state, :name)"},
  };
  json out = json::array();
  for (const auto& op : ops) out.push_back({{"name", op.name}, {"signature", op.signature}});
  return out;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(options) {}
Service::~Service() = default;

void Service::add_dataset(const std::string& id, std::shared_ptr<const Dataset> dataset) {
  std::lock_guard lock(mutex_);
  datasets_[id] = std::move(dataset);
}

std::shared_ptr<const Dataset> Service::dataset(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = datasets_.find(id);
  return it == datasets_.end() ? nullptr : it->second;
}

Service::SessionEntry* Service::session(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

Response Service::create_session(std::string_view body) {
  auto req = parse_body(body);
  auto id = field(req, "datasetId");
  auto d = dataset(id);
  if (!d) return error(404, "unknown dataset '" + id + "'");
  auto entry = std::make_unique<SessionEntry>();
  entry->dataset_id = id;
  entry->session = std::make_unique<Session>(d);
  entry->interpreter = std::make_unique<Interpreter>(*entry->session);
  std::lock_guard lock(mutex_);
  auto sid = "sess" + std::to_string(next_session_++);
  sessions_[sid] = std::move(entry);
  return reply(201, {{"sessionId", sid}, {"datasetId", id}});
}

Response Service::eval(SessionEntry& s, std::string_view body) {
  auto req = parse_body(body);
  auto script = field(req, "script");
  std::unique_lock lock(s.session->writer_mutex(), std::defer_lock);
  if (options_.writes == ServiceOptions::Writes::Reject) {
    if (!lock.try_lock()) return error(409, "session is busy");
  } else {
    lock.lock();
  }
  auto before = s.session->size();
  auto created_since = [&] {
    auto ids = s.session->state_ids();
    return std::vector<std::string>(ids.begin() + static_cast<std::ptrdiff_t>(before), ids.end());
  };
  try {
    auto result = s.interpreter->run(script);
    json j{{"stateIds", result.created}, {"errors", json::array()}};
    if (result.last) j["result"] = input_name(*result.last);
    return reply(200, j);
  } catch (const Error& e) {
    return reply(400, {{"stateIds", created_since()}, {"errors", json::array({error_entry(e)})}});
  }
}

Response Service::replay(SessionEntry& s, std::string_view body) {
  auto req = parse_body(body);
  if (!req.contains("stateIds") || !req["stateIds"].is_array())
    throw std::invalid_argument("missing array field 'stateIds'");
  std::vector<StateId> ids = req["stateIds"].get<std::vector<StateId>>();
  std::lock_guard lock(s.session->writer_mutex());
  try {
    std::map<std::string, Input> subs;
    if (req.contains("substitutions"))
      for (const auto& [name, text] : req["substitutions"].items())
        subs.emplace(name, s.interpreter->evaluate(dsl::parse_expression(text.get<std::string>())));
    for (const auto& id : ids)
      if (!s.session->has_state(id)) return error(404, "unknown state '" + id + "'");
    return reply(200, {{"stateIds", s.session->replay(ids, subs)}, {"errors", json::array()}});
  } catch (const Error& e) {
    return reply(400, {{"stateIds", json::array()}, {"errors", json::array({error_entry(e)})}});
  }
}

Response Service::items(SessionEntry& s, const std::string& state, const std::map<std::string, std::string>& q) {
  if (!s.session->has_state(state)) return error(404, "unknown state '" + state + "'");
  auto offset = number_param(q, "offset", 0);
  auto limit = number_param(q, "limit", options_.default_page);
  try {
    const auto& set = s.session->extension(state);
    auto j = render::page(set, s.session->catalog(), offset, limit);
    j["stateId"] = state;
    j["intentionText"] = s.session->state(state).intention_text;
    return reply(200, j);
  } catch (const Error& e) {
    return reply(400, {{"errors", json::array({error_entry(e)})}});
  }
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body,
                         const std::map<std::string, std::string>& query) {
  auto parts = split_path(path);
  if (parts.empty() || parts[0] != "v1") return error(404, "no route for " + std::string(path));
  parts.erase(parts.begin());
  const bool get = method == "GET";
  const bool post = method == "POST";
  auto n = parts.size();
  try {
    if (n == 1 && parts[0] == "operators" && get) return reply(200, operators_manifest());
    if (n == 1 && parts[0] == "datasets" && get) {
      std::lock_guard lock(mutex_);
      json out = json::array();
      for (const auto& [id, d] : datasets_)
        out.push_back({{"id", id}, {"fingerprint", dataset_fingerprint(*d)}, {"items", d->item_count()},
                       {"relations", d->relations().size()}});
      return reply(200, out);
    }
    if (n == 3 && parts[0] == "datasets" && parts[2] == "schema" && get) {
      auto d = dataset(parts[1]);
      if (!d) return error(404, "unknown dataset '" + parts[1] + "'");
      return reply(200, render::schema(schema_summary(*d)));
    }
    if (n == 2 && parts[0] == "grammar" && parts[1] == "presets" && get) {
      json out = json::array();
      for (const auto& p : grammar_presets())
        out.push_back({{"name", p.name}, {"version", p.version}, {"tools", p.tools}, {"grammar", p.text}});
      return reply(200, out);
    }
    if (n == 2 && parts[0] == "grammar" && parts[1] == "check" && post) {
      auto req = parse_body(body);
      auto g = grammar_arg(field(req, "grammar"));
      auto sk = skeleton_of(field(req, "expr"));
      auto j = render::derivation(sk, derive(g, sk));
      j["lint"] = Grammar::lint(sk);
      return reply(200, j);
    }
    if (n == 2 && parts[0] == "grammar" && parts[1] == "compare" && post) {
      auto req = parse_body(body);
      auto depth = req.value("depth", std::size_t{4});
      return reply(200, render::comparison(compare_grammars(grammar_arg(field(req, "a")),
                                                          grammar_arg(field(req, "b")), depth)));
    }
    if (n == 2 && parts[0] == "profiles" && parts[1] == "compare" && post) {
      auto req = parse_body(body);
      auto c = compare_profiles(profile_arg(field(req, "a")), profile_arg(field(req, "b")));
      auto j = render::comparison(c);
      j["text"] = c.to_string();
      return reply(200, j);
    }
    if (n == 1 && parts[0] == "sessions" && post) return create_session(body);
    if (n == 3 && parts[0] == "states" && parts[2] == "items" && get) {
      auto dot = parts[1].find('.');
      if (dot == std::string::npos) return error(404, "state references look like <session>.<state>");
      auto* s = session(parts[1].substr(0, dot));
      if (!s) return error(404, "unknown session '" + parts[1].substr(0, dot) + "'");
      return items(*s, parts[1].substr(dot + 1), query);
    }
    if (n >= 2 && parts[0] == "sessions") {
      auto* s = session(parts[1]);
      if (!s) return error(404, "unknown session '" + parts[1] + "'");
      if (n == 2 && get) {
        json states = json::array();
        for (const auto& id : s->session->state_ids()) {
          const auto& st = s->session->state(id);
          states.push_back({{"id", id}, {"op", st.intention.op}, {"intentionText", st.intention_text},
                            {"derived", st.derived}});
        }
        json bindings = json::object();
        for (const auto& [name, in] : s->session->bindings()) bindings[name] = input_name(in);
        return reply(200, {{"sessionId", parts[1]}, {"datasetId", s->dataset_id}, {"states", states},
                           {"bindings", bindings}});
      }
      if (n == 3 && parts[2] == "eval" && post) return eval(*s, body);
      if (n == 3 && parts[2] == "replay" && post) return replay(*s, body);
      if (n == 3 && parts[2] == "trail" && get) return reply(200, render::trail(s->session->trail()));
      if (n == 3 && parts[2] == "script" && get) return reply(200, {{"script", s->session->save()}});
      if (n == 5 && parts[2] == "states" && parts[4] == "items" && get) return items(*s, parts[3], query);
    }
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const Error& e) {
    return reply(400, {{"error", e.what()}, {"errors", json::array({error_entry(e)})}});
  }
  return error(404, "no route for " + std::string(method) + " " + std::string(path));
}

int Service::bind(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    auto r = handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->http.Get(R"(/v1/.*)", route);
  server_->http.Post(R"(/v1/.*)", route);
  if (port == 0) return server_->http.bind_to_any_port(host);
  return server_->http.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return server_ && server_->http.listen_after_bind(); }

void Service::stop() {
  if (server_) server_->http.stop();
}

}  // namespace xplore
