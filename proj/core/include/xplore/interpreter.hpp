#pragma once

// Evaluates DSL scripts against a session. Every operator application becomes
// one session state; nested applications become their own states first.

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "xplore/dsl.hpp"
#include "xplore/session.hpp"

namespace xplore {

struct EvalResult {
  /// States created, in creation order (back-propagated states included).
  std::vector<StateId> created;
  /// Value of the last statement.
  std::optional<Input> last;
};

class Interpreter {
 public:
  explicit Interpreter(Session& session) : session_(session) {}

  /// Throws ParseError, EvalError (with the span of the failing
  /// sub-expression), SessionError or ResolutionError.
  EvalResult run(std::string_view script);
  EvalResult run(const dsl::Script& script);
  Input run(const dsl::Statement& statement);
  /// Evaluates one expression without binding a name.
  Input evaluate(const dsl::Expr& expr);

  Session& session() noexcept { return session_; }

 private:
  friend class CallCompiler;
  Input evaluate_in_scope(const dsl::Expr& expr, const std::optional<Input>& irs);
  Input resolve_name(const dsl::Expr& name, const std::optional<Input>& irs) const;

  Session& session_;
  std::vector<StateId> last_branch_;
};

/// Builds a session from saved text (see Session::save). The fingerprint
/// header must match the dataset unless check_fingerprint is false.
std::unique_ptr<Session> load_session(std::string_view text, std::shared_ptr<const Dataset> dataset,
                                      bool check_fingerprint = true);

}  // namespace xplore
