#pragma once

// Strategy grammars over expression skeletons: parsing, membership,
// bounded enumeration and language comparison.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xplore/dsl.hpp"

namespace xplore {

/// An expression with every non-expression argument erased. Leaves are the
/// terminals "s0" and "irs".
struct Skeleton {
  std::string op;
  std::vector<Skeleton> children;
  bool bang = false;

  static Skeleton leaf(std::string terminal) { return {std::move(terminal), {}, false}; }
  static Skeleton call(std::string op, std::vector<Skeleton> children, bool bang = false) {
    return {std::move(op), std::move(children), bang};
  }

  bool is_terminal() const noexcept { return children.empty() && (op == "s0" || op == "irs"); }
  /// Operator nesting depth; terminals have depth 0.
  std::size_t depth() const;
  std::string to_string() const;

  friend bool operator==(const Skeleton& a, const Skeleton& b);
  friend std::strong_ordering operator<=>(const Skeleton& a, const Skeleton& b);
};

/// Erases relations, predicates, levels and literals. Chained calls become
/// nested calls, `union` becomes `unite`, source names other than `irs`
/// become `s0`. Throws GrammarError for expressions that are not set-valued.
Skeleton skeleton_of(const dsl::Expr& expr);
/// Parses DSL text and erases it.
Skeleton skeleton_of(std::string_view expression_text);

class Grammar {
 public:
  /// One alternative of a production body or of a call argument slot.
  struct Alt {
    enum class Kind { Terminal, Nonterminal, Call };
    Kind kind = Kind::Terminal;
    std::string name;                       // terminal, nonterminal or operator
    std::vector<std::vector<Alt>> slots;    // Call only: alternatives per argument
    bool bang = false;
  };

  /// "S -> refine(S | s0)" lines ("→" accepted), '#' comments, ';' also
  /// separates productions. The first left-hand side is the start symbol.
  static Grammar parse(std::string_view text);

  const std::string& start() const noexcept { return start_; }
  const std::map<std::string, std::vector<Alt>>& productions() const noexcept { return rules_; }
  std::string to_string() const;

  /// Stray `irs` outside a branch body, as human-readable findings.
  static std::vector<std::string> lint(const Skeleton& s);

 private:
  std::string start_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Alt>> rules_;
};

struct Derivation {
  bool accepted = false;
  /// Productions applied, in pre-order, e.g. "S -> R!", "R -> refine(P)".
  std::vector<std::string> steps;
};

/// Membership by memoized top-down matching. Inside branch bodies the
/// terminal s0 also matches the skeleton `irs`.
Derivation derive(const Grammar& g, const Skeleton& s);
inline bool derivable(const Grammar& g, const Skeleton& s) { return derive(g, s).accepted; }

struct EnumerationLimits {
  std::size_t max_depth = 6;
  std::size_t max_sentences = 1'000'000;
};

/// Every sentence of nesting depth <= depth. Throws CapExceeded when depth
/// exceeds limits.max_depth or the language grows past limits.max_sentences.
std::set<Skeleton> enumerate(const Grammar& g, std::size_t depth, const EnumerationLimits& limits = {});

struct GrammarComparison {
  std::size_t requested_depth = 0;
  /// Depths actually enumerated for each side; smaller than requested when
  /// the language exceeded the sentence cap.
  std::size_t depth_a = 0;
  std::size_t depth_b = 0;
  /// Sentences of a (up to depth_a) not derivable in b, and the converse.
  std::vector<Skeleton> only_a;
  std::vector<Skeleton> only_b;

  bool a_within_b() const noexcept { return only_a.empty(); }
  bool b_within_a() const noexcept { return only_b.empty(); }
  std::string to_string() const;
};

GrammarComparison compare_grammars(const Grammar& a, const Grammar& b, std::size_t depth,
                                   const EnumerationLimits& limits = {});

}  // namespace xplore
