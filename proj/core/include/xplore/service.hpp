#pragma once

// HTTP/JSON API over datasets, sessions, evaluation, trails and grammar
// analysis. All routes live under /v1. handle() is transport-free so tests
// and the CLI can drive it directly; serve() puts it behind an HTTP server.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "xplore/ingest.hpp"
#include "xplore/interpreter.hpp"
#include "xplore/session.hpp"

namespace xplore {

struct ServiceOptions {
  /// What a second concurrent eval on the same session gets.
  enum class Writes { Queue, Reject } writes = Writes::Queue;
  std::size_t default_page = 50;
};

struct Response {
  int status = 200;
  std::string body;  // JSON
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Registers a dataset under id; replaces an existing one.
  void add_dataset(const std::string& id, std::shared_ptr<const Dataset> dataset);

  /// Routes one request. query holds decoded URL query parameters.
  Response handle(std::string_view method, std::string_view path, std::string_view body = {},
                  const std::map<std::string, std::string>& query = {});

  /// Binds host:port (port 0 picks a free one) and returns the bound port,
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves requests on the bound socket until stop(). Blocks.
  bool listen();
  void stop();

 private:
  struct SessionEntry {
    std::string dataset_id;
    std::unique_ptr<Session> session;
    std::unique_ptr<Interpreter> interpreter;
  };
  struct Server;

  std::shared_ptr<const Dataset> dataset(const std::string& id) const;
  SessionEntry* session(const std::string& id);

  Response create_session(std::string_view body);
  Response eval(SessionEntry& s, std::string_view body);
  Response replay(SessionEntry& s, std::string_view body);
  Response items(SessionEntry& s, const std::string& state, const std::map<std::string, std::string>& query);

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::map<std::string, std::unique_ptr<SessionEntry>> sessions_;
  std::size_t next_session_ = 1;
  std::unique_ptr<Server> server_;
};

}  // namespace xplore
