#include "xplore/grammar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>
#include <tuple>

#include "xplore/errors.hpp"

namespace xplore {

bool operator==(const Skeleton& a, const Skeleton& b) {
  return a.op == b.op && a.bang == b.bang && a.children == b.children;
}

std::strong_ordering operator<=>(const Skeleton& a, const Skeleton& b) {
  if (auto c = a.op.compare(b.op) <=> 0; c != 0) return c;
  if (auto c = a.bang <=> b.bang; c != 0) return c;
  return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(),
                                                b.children.begin(), b.children.end());
}

std::size_t Skeleton::depth() const {
  if (is_terminal()) return 0;
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::string Skeleton::to_string() const {
  std::string out = op;
  if (!is_terminal()) {
    out += "(";
    for (std::size_t i = 0; i < children.size(); ++i) out += (i ? ", " : "") + children[i].to_string();
    out += ")";
  }
  return bang ? out + "!" : out;
}

namespace {

std::size_t input_arity(std::string_view op) {
  if (op == "branch") return 3;
  if (op == "correlate" || op == "unite" || op == "union" || op == "intersect" || op == "diff") return 2;
  return 1;
}

}  // namespace

Skeleton skeleton_of(const dsl::Expr& e) {
  using Kind = dsl::Expr::Kind;
  Skeleton s;
  switch (e.kind) {
    case Kind::Name:
      s = Skeleton::leaf(e.text == "irs" ? "irs" : "s0");
      break;
    case Kind::SetLit:
      s = Skeleton::leaf("s0");
      break;
    case Kind::Call: {
      if (!dsl::is_operator_name(e.text))
        throw GrammarError("'" + e.text + "' is not an exploration operator");
      s.op = e.text == "union" ? "unite" : e.text;
      std::size_t want = input_arity(e.text);
      for (const auto& a : e.args) {
        if (s.children.size() == want) break;
        if (a.kind == Kind::KwArg) continue;
        s.children.push_back(skeleton_of(a));
      }
      if (s.children.size() != want)
        throw GrammarError("'" + e.text + "' needs " + std::to_string(want) + " input expression(s)");
      break;
    }
    default:
      throw GrammarError("expected a set expression, found '" + dsl::print(e) + "'");
  }
  s.bang = e.bang;
  return s;
}

Skeleton skeleton_of(std::string_view expression_text) {
  return skeleton_of(dsl::parse_expression(expression_text));
}

// ---------------------------------------------------------------------------
// Grammar text

namespace {

struct GToken {
  enum Kind { Ident, LParen, RParen, Comma, Bar, Bang, Arrow, End } kind;
  std::string text;
};

std::vector<GToken> lex_grammar(std::string_view src) {
  std::vector<GToken> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({GToken::Ident, std::string(src.substr(i, j - i))});
      i = j;
    } else if (src.substr(i, 2) == "->") {
      out.push_back({GToken::Arrow, "->"});
      i += 2;
    } else if (src.substr(i, 3) == "\xE2\x86\x92") {
      out.push_back({GToken::Arrow, "->"});
      i += 3;
    } else {
      GToken::Kind k;
      switch (c) {
        case '(': k = GToken::LParen; break;
        case ')': k = GToken::RParen; break;
        case ',': k = GToken::Comma; break;
        case '|': k = GToken::Bar; break;
        case '!': k = GToken::Bang; break;
        default: throw GrammarError(std::string("unexpected character '") + c + "' in grammar");
      }
      out.push_back({k, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({GToken::End, ""});
  return out;
}

class GrammarParser {
 public:
  explicit GrammarParser(std::string_view src) : t_(lex_grammar(src)) {}

  template <typename Add>
  void productions(Add add) {
    if (peek().kind == GToken::End) throw GrammarError("empty grammar");
    while (peek().kind != GToken::End) {
      if (peek().kind != GToken::Ident || peek(1).kind != GToken::Arrow)
        throw GrammarError("expected 'Nonterminal ->', found '" + peek().text + "'");
      std::string lhs = take().text;
      if (!std::isupper(static_cast<unsigned char>(lhs[0])))
        throw GrammarError("nonterminal '" + lhs + "' must start with a capital letter");
      take();
      std::vector<Grammar::Alt> body{alt()};
      while (peek().kind == GToken::Bar) {
        take();
        body.push_back(alt());
      }
      add(lhs, std::move(body));
    }
  }

 private:
  const GToken& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  const GToken& take() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }

  Grammar::Alt alt() {
    if (peek().kind != GToken::Ident) throw GrammarError("expected a symbol, found '" + peek().text + "'");
    Grammar::Alt a;
    a.name = take().text;
    if (peek().kind == GToken::LParen) {
      take();
      a.kind = Grammar::Alt::Kind::Call;
      while (true) {
        std::vector<Grammar::Alt> slot{alt()};
        while (peek().kind == GToken::Bar) {
          take();
          slot.push_back(alt());
        }
        a.slots.push_back(std::move(slot));
        if (peek().kind == GToken::Comma) {
          take();
          continue;
        }
        if (peek().kind != GToken::RParen) throw GrammarError("expected ')' after '" + a.name + "('");
        take();
        break;
      }
    } else if (std::isupper(static_cast<unsigned char>(a.name[0]))) {
      a.kind = Grammar::Alt::Kind::Nonterminal;
    } else if (a.name == "s0" || a.name == "irs") {
      a.kind = Grammar::Alt::Kind::Terminal;
    } else {
      throw GrammarError("unknown terminal '" + a.name + "'");
    }
    if (peek().kind == GToken::Bang) {
      take();
      a.bang = true;
    }
    return a;
  }

  std::vector<GToken> t_;
  std::size_t pos_ = 0;
};

std::string alt_text(const Grammar::Alt& a) {
  std::string out = a.name;
  if (a.kind == Grammar::Alt::Kind::Call) {
    out += "(";
    for (std::size_t i = 0; i < a.slots.size(); ++i) {
      if (i) out += ", ";
      for (std::size_t j = 0; j < a.slots[i].size(); ++j) out += (j ? " | " : "") + alt_text(a.slots[i][j]);
    }
    out += ")";
  }
  return a.bang ? out + "!" : out;
}

void check_declared(const Grammar::Alt& a, const std::map<std::string, std::vector<Grammar::Alt>>& rules) {
  if (a.kind == Grammar::Alt::Kind::Nonterminal && !rules.contains(a.name))
    throw GrammarError("undeclared nonterminal '" + a.name + "'");
  for (const auto& slot : a.slots)
    for (const auto& x : slot) check_declared(x, rules);
}

}  // namespace

Grammar Grammar::parse(std::string_view text) {
  Grammar g;
  GrammarParser(text).productions([&](const std::string& lhs, std::vector<Alt> body) {
    if (g.start_.empty()) g.start_ = lhs;
    auto [it, fresh] = g.rules_.try_emplace(lhs);
    if (fresh) g.order_.push_back(lhs);
    for (auto& a : body) it->second.push_back(std::move(a));
  });
  for (const auto& [lhs, body] : g.rules_)
    for (const auto& a : body) check_declared(a, g.rules_);
  return g;
}

std::string Grammar::to_string() const {
  std::string out;
  for (const auto& lhs : order_) {
    out += lhs + " -> ";
    const auto& body = rules_.at(lhs);
    for (std::size_t i = 0; i < body.size(); ++i) out += (i ? " | " : "") + alt_text(body[i]);
    out += "\n";
  }
  return out;
}

std::vector<std::string> Grammar::lint(const Skeleton& s) {
  std::vector<std::string> out;
  std::function<void(const Skeleton&, bool)> walk = [&](const Skeleton& n, bool body) {
    if (n.op == "irs" && !body) out.push_back("irs outside a branch body");
    for (std::size_t i = 0; i < n.children.size(); ++i)
      walk(n.children[i], body || (n.op == "branch" && i > 0));
  };
  walk(s, false);
  return out;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

class Matcher {
 public:
  explicit Matcher(const Grammar& g) : g_(g) {}

  bool nt(const std::string& name, const Skeleton& node, bool body, bool strip) {
    const auto& alts = g_.productions().at(name);
    Key key{&alts, &node, body, strip};
    auto [it, fresh] = memo_.try_emplace(key, -1);
    if (!fresh) return it->second >= 0;
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (alt(alts[i], node, body, strip)) {
        memo_[key] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  }

  bool alt(const Grammar::Alt& a, const Skeleton& node, bool body, bool strip) {
    bool bang = strip ? false : node.bang;
    switch (a.kind) {
      case Grammar::Alt::Kind::Terminal:
        return bang == a.bang && node.is_terminal() &&
               (node.op == a.name || (body && a.name == "s0" && node.op == "irs"));
      case Grammar::Alt::Kind::Nonterminal:
        if (a.bang) return bang && nt(a.name, node, body, true);
        return nt(a.name, node, body, strip);
      case Grammar::Alt::Kind::Call:
        if (bang != a.bang || node.op != a.name || node.is_terminal() ||
            node.children.size() != a.slots.size())
          return false;
        for (std::size_t i = 0; i < a.slots.size(); ++i)
          if (slot_choice(a, i, node, body) < 0) return false;
        return true;
    }
    return false;
  }

  // Index of the first slot alternative matching child i, or -1.
  int slot_choice(const Grammar::Alt& a, std::size_t i, const Skeleton& node, bool body) {
    bool child_body = body || (a.name == "branch" && i > 0);
    for (std::size_t k = 0; k < a.slots[i].size(); ++k)
      if (alt(a.slots[i][k], node.children[i], child_body, false)) return static_cast<int>(k);
    return -1;
  }

  void explain(const std::string& name, const Skeleton& node, bool body, bool strip,
               std::vector<std::string>& steps) {
    const auto& alts = g_.productions().at(name);
    const auto& a = alts[static_cast<std::size_t>(memo_.at(Key{&alts, &node, body, strip}))];
    steps.push_back(name + " -> " + alt_text(a));
    explain_alt(a, node, body, strip, steps);
  }

 private:
  using Key = std::tuple<const std::vector<Grammar::Alt>*, const Skeleton*, bool, bool>;

  void explain_alt(const Grammar::Alt& a, const Skeleton& node, bool body, bool strip,
                   std::vector<std::string>& steps) {
    if (a.kind == Grammar::Alt::Kind::Nonterminal) {
      explain(a.name, node, body, strip || a.bang, steps);
    } else if (a.kind == Grammar::Alt::Kind::Call) {
      for (std::size_t i = 0; i < a.slots.size(); ++i) {
        bool child_body = body || (a.name == "branch" && i > 0);
        int k = slot_choice(a, i, node, body);
        explain_alt(a.slots[i][static_cast<std::size_t>(k)], node.children[i], child_body, false, steps);
      }
    }
  }

  const Grammar& g_;
  std::map<Key, int> memo_;
};

}  // namespace

Derivation derive(const Grammar& g, const Skeleton& s) {
  Matcher m(g);
  Derivation d;
  d.accepted = m.nt(g.start(), s, false, false);
  if (d.accepted) m.explain(g.start(), s, false, false, d.steps);
  return d;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Sentences are hash-consed: equal subtrees share one id, so languages are
// sets of ints and products only copy child ids.
using NodeRef = std::uint32_t;
using Language = std::set<NodeRef>;
// Per nonterminal, per context (0 = outside branch bodies, 1 = inside).
using Table = std::map<std::string, std::array<Language, 2>>;

class Enumerator {
 public:
  Enumerator(const Grammar& g, const EnumerationLimits& limits) : g_(g), limits_(limits) {}

  std::set<Skeleton> run(std::size_t depth) {
    if (depth > limits_.max_depth)
      throw CapExceeded("depth " + std::to_string(depth) + " exceeds the cap of " +
                        std::to_string(limits_.max_depth));
    // tables_[d] holds the sentences of depth <= d. Calls at depth d read
    // only tables_[d-1], so they are expanded once; unit alternatives are
    // closed over tables_[d].
    for (std::size_t d = 0; d <= depth; ++d) {
      tables_.emplace_back();
      for (const auto& [name, alts] : g_.productions())
        for (int b = 0; b < 2; ++b) {
          Language add;
          for (const auto& a : alts)
            if (a.kind != Grammar::Alt::Kind::Nonterminal) expand(a, b == 1, d, add);
          merge(name, b, d, add);
        }
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto& [name, alts] : g_.productions())
          for (int b = 0; b < 2; ++b) {
            Language add;
            for (const auto& a : alts)
              if (a.kind == Grammar::Alt::Kind::Nonterminal) expand(a, b == 1, d, add);
            changed |= merge(name, b, d, add);
          }
      }
    }
    std::set<Skeleton> out;
    std::vector<std::optional<Skeleton>> built(nodes_.size());
    for (auto id : tables_[depth][g_.start()][0]) out.insert(build(id, built));
    return out;
  }

 private:
  struct Node {
    std::string op;
    bool bang = false;
    std::vector<NodeRef> children;
    auto operator<=>(const Node&) const = default;
  };

  NodeRef intern(Node n) {
    auto [it, fresh] = ids_.try_emplace(n, static_cast<NodeRef>(nodes_.size()));
    if (fresh) nodes_.push_back(std::move(n));
    return it->second;
  }

  bool merge(const std::string& name, int b, std::size_t d, const Language& add) {
    auto& target = tables_[d][name][static_cast<std::size_t>(b)];
    bool changed = false;
    for (auto x : add) changed |= target.insert(x).second;
    if (target.size() > limits_.max_sentences)
      throw CapExceeded("more than " + std::to_string(limits_.max_sentences) + " sentences at depth " +
                        std::to_string(d));
    return changed;
  }

  const Skeleton& build(NodeRef id, std::vector<std::optional<Skeleton>>& built) {
    if (!built[id]) {
      const Node& n = nodes_[id];
      std::vector<Skeleton> children;
      for (auto c : n.children) children.push_back(build(c, built));
      built[id] = Skeleton{n.op, std::move(children), n.bang};
    }
    return *built[id];
  }

  void expand(const Grammar::Alt& a, bool body, std::size_t d, Language& out) {
    switch (a.kind) {
      case Grammar::Alt::Kind::Terminal:
        out.insert(intern({a.name, a.bang, {}}));
        if (body && a.name == "s0") out.insert(intern({"irs", a.bang, {}}));
        return;
      case Grammar::Alt::Kind::Nonterminal: {
        auto it = tables_[d].find(a.name);
        if (it == tables_[d].end()) return;
        for (auto x : it->second[body ? 1 : 0]) {
          if (!a.bang) {
            out.insert(x);
          } else if (!nodes_[x].bang) {
            Node n = nodes_[x];
            n.bang = true;
            out.insert(intern(std::move(n)));
          }
        }
        return;
      }
      case Grammar::Alt::Kind::Call: {
        if (d == 0) return;
        std::vector<std::vector<NodeRef>> slots;
        double total = 1;
        for (std::size_t i = 0; i < a.slots.size(); ++i) {
          bool child_body = body || (a.name == "branch" && i > 0);
          Language options;
          for (const auto& x : a.slots[i]) expand(x, child_body, d - 1, options);
          total *= static_cast<double>(options.size());
          slots.emplace_back(options.begin(), options.end());
        }
        if (total > static_cast<double>(limits_.max_sentences))
          throw CapExceeded("more than " + std::to_string(limits_.max_sentences) + " '" + a.name +
                            "' sentences at depth " + std::to_string(d));
        if (total == 0) return;
        std::vector<NodeRef> children(slots.size());
        std::function<void(std::size_t)> product = [&](std::size_t i) {
          if (i == slots.size()) {
            out.insert(intern({a.name, a.bang, children}));
            return;
          }
          for (auto x : slots[i]) {
            children[i] = x;
            product(i + 1);
          }
        };
        product(0);
        return;
      }
    }
  }

  const Grammar& g_;
  EnumerationLimits limits_;
  std::vector<Table> tables_;
  std::vector<Node> nodes_;
  std::map<Node, NodeRef> ids_;
};

}  // namespace

std::set<Skeleton> enumerate(const Grammar& g, std::size_t depth, const EnumerationLimits& limits) {
  return Enumerator(g, limits).run(depth);
}

GrammarComparison compare_grammars(const Grammar& a, const Grammar& b, std::size_t depth,
                                   const EnumerationLimits& limits) {
  if (depth > limits.max_depth)
    throw CapExceeded("depth " + std::to_string(depth) + " exceeds the cap of " +
                      std::to_string(limits.max_depth));
  GrammarComparison r;
  r.requested_depth = depth;
  auto side = [&](const Grammar& from, const Grammar& other, std::size_t& reached,
                  std::vector<Skeleton>& only) {
    for (std::size_t d = depth + 1; d-- > 0;) {
      try {
        auto sentences = enumerate(from, d, limits);
        reached = d;
        for (const auto& s : sentences)
          if (!derivable(other, s)) only.push_back(s);
        return;
      } catch (const CapExceeded&) {
        if (d == 0) throw;
      }
    }
  };
  side(a, b, r.depth_a, r.only_a);
  side(b, a, r.depth_b, r.only_b);
  return r;
}

std::string GrammarComparison::to_string() const {
  std::ostringstream os;
  os << "depth " << requested_depth << "\n";
  auto block = [&](const char* label, std::size_t reached, const std::vector<Skeleton>& only) {
    os << label << " (enumerated to depth " << reached << "): " << only.size() << "\n";
    for (const auto& s : only) os << "  " << s.to_string() << "\n";
  };
  block("only in a", depth_a, only_a);
  block("only in b", depth_b, only_b);
  os << "a within b: " << (a_within_b() ? "yes" : "no") << "\n";
  os << "b within a: " << (b_within_a() ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace xplore
