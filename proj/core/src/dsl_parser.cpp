#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "xplore/dsl.hpp"
#include "xplore/errors.hpp"

namespace xplore::dsl {

namespace {

constexpr std::array kOperators = {"pivot",  "refine", "group",  "rank",  "slice",     "correlate",
                                   "thmap",  "ahmap",  "chmap",  "tvmap", "avmap",     "cvmap",
                                   "unite",  "union",  "intersect", "diff", "branch",  "register"};
constexpr std::array kPredicates = {"equals", "equalsOne", "matchAll",    "matchOne", "not",
                                    "and",    "or",        "greaterThan", "contains", "true"};
constexpr std::array kFunctions = {"round", "c", "via", "pattern", "tuple", "tuples"};

template <std::size_t N>
bool in(const std::array<const char*, N>& names, std::string_view name) {
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return name == n; });
}

enum class Tok {
  Ident, RelId, Number, String, Placeholder,
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Comma, Dot, DotDot, Equals, Bang, Plus, Minus, Star, Semi, Newline, End,
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::RelId: return "relation";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Placeholder: return "%item";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Equals: return "'='";
    case Tok::Bang: return "'!'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Semi: return "';'";
    case Tok::Newline: return "newline";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  std::size_t begin;
  std::size_t end;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1, depth = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](Tok kind, std::size_t len, std::string text) {
    out.push_back({kind, std::move(text), line, col, i, i + len});
    advance(len);
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      if (depth == 0) emit(Tok::Newline, 1, "\n");
      else advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      emit(Tok::Ident, j - i, std::string(src.substr(i, j - i)));
      continue;
    }
    if (c == ':') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j == i + 1) throw ParseError("expected relation name after ':'", line, col, {"identifier"});
      emit(Tok::RelId, j - i, std::string(src.substr(i, j - i)));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      emit(Tok::Number, j - i, std::string(src.substr(i, j - i)));
      continue;
    }
    if (c == '"') {
      std::string value;
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        if (src[j] == '\n') throw ParseError("unterminated string", line, col);
        if (src[j] == '\\' && j + 1 < src.size()) {
          char e = src[++j];
          value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          value += src[j];
        }
        ++j;
      }
      if (j >= src.size()) throw ParseError("unterminated string", line, col);
      emit(Tok::String, j + 1 - i, std::move(value));
      continue;
    }
    if (src.substr(i, 5) == "%item") {
      emit(Tok::Placeholder, 5, "%item");
      continue;
    }
    switch (c) {
      case '(': ++depth; emit(Tok::LParen, 1, "("); continue;
      case '[': ++depth; emit(Tok::LBracket, 1, "["); continue;
      case '{': ++depth; emit(Tok::LBrace, 1, "{"); continue;
      case ')': depth = depth ? depth - 1 : 0; emit(Tok::RParen, 1, ")"); continue;
      case ']': depth = depth ? depth - 1 : 0; emit(Tok::RBracket, 1, "]"); continue;
      case '}': depth = depth ? depth - 1 : 0; emit(Tok::RBrace, 1, "}"); continue;
      case ',': emit(Tok::Comma, 1, ","); continue;
      case '.':
        if (src.substr(i, 2) == "..") emit(Tok::DotDot, 2, "..");
        else emit(Tok::Dot, 1, ".");
        continue;
      case '=': emit(Tok::Equals, 1, "="); continue;
      case '!': emit(Tok::Bang, 1, "!"); continue;
      case '+': emit(Tok::Plus, 1, "+"); continue;
      case '-': emit(Tok::Minus, 1, "-"); continue;
      case '*': emit(Tok::Star, 1, "*"); continue;
      case ';': emit(Tok::Semi, 1, ";"); continue;
      default: break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Tok::End, "", line, col, i, i});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  Expr expression_only() {
    skip_separators();
    Expr e = expr();
    skip_separators();
    expect(Tok::End);
    return e;
  }

  Script script() {
    Script s;
    skip_separators();
    while (peek().kind != Tok::End) {
      s.statements.push_back(statement());
      if (peek().kind != Tok::End) {
        if (peek().kind != Tok::Semi && peek().kind != Tok::Newline)
          fail("expected end of statement", {"';'", "newline"});
        skip_separators();
      }
    }
    return s;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }
  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail("expected " + std::string(describe(kind)), {std::string(describe(kind))});
    return take();
  }
  [[noreturn]] void fail(const std::string& message, std::set<std::string> expected = {}) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::Newline) found = "newline";
    throw ParseError(message + ", found " + found, t.line, t.column, std::move(expected));
  }
  void skip_separators() {
    while (peek().kind == Tok::Semi || peek().kind == Tok::Newline) take();
  }

  Span open_span() const {
    const auto& t = peek();
    return {t.line, t.column, t.begin, t.begin};
  }
  void close_span(Expr& e, Span s) const {
    s.end = tokens_[pos_ ? pos_ - 1 : 0].end;
    e.span = s;
  }

  Statement statement() {
    Statement st;
    st.span = open_span();
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Equals) {
      st.target = take().text;
      take();
    }
    st.expr = expr();
    st.span.end = st.expr.span.end;
    return st;
  }

  Expr expr() {
    Span s = open_span();
    Expr left = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      std::string op = take().text;
      Expr right = term();
      Expr b;
      b.kind = Expr::Kind::Binary;
      b.text = op;
      b.args = {std::move(left), std::move(right)};
      close_span(b, s);
      left = std::move(b);
    }
    return left;
  }

  Expr term() {
    Span s = open_span();
    Expr left = unary();
    while (peek().kind == Tok::Star) {
      take();
      Expr right = unary();
      Expr b;
      b.kind = Expr::Kind::Binary;
      b.text = "*";
      b.args = {std::move(left), std::move(right)};
      close_span(b, s);
      left = std::move(b);
    }
    return left;
  }

  Expr unary() {
    Span s = open_span();
    if (accept(Tok::Minus)) {
      if (peek().kind == Tok::Number) {
        Expr n = Expr::number("-" + take().text);
        close_span(n, s);
        return postfix_tail(std::move(n), s);
      }
      Expr u;
      u.kind = Expr::Kind::Unary;
      u.text = "-";
      u.args.push_back(unary());
      close_span(u, s);
      return u;
    }
    return postfix();
  }

  Expr postfix() {
    Span s = open_span();
    return postfix_tail(atom(), s);
  }

  Expr postfix_tail(Expr e, Span s) {
    while (peek().kind == Tok::Dot) {
      take();
      const auto& name = peek();
      if (name.kind != Tok::Ident) fail("expected operator name after '.'", {"identifier"});
      Expr c = call(std::move(e), s);
      c.chained = true;
      e = std::move(c);
    }
    if (accept(Tok::Bang)) {
      e.bang = true;
      close_span(e, s);
    }
    return e;
  }

  // Parses name "(" args ")" [slice]; a non-empty receiver becomes args[0].
  Expr call(std::optional<Expr> receiver, Span s) {
    const Token& name = take();
    if (!is_callable_name(name.text))
      throw ParseError("unknown operator '" + name.text + "'", name.line, name.column);
    Expr c;
    c.kind = Expr::Kind::Call;
    c.text = name.text;
    if (receiver) c.args.push_back(std::move(*receiver));
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      c.args.push_back(arg());
      while (accept(Tok::Comma)) c.args.push_back(arg());
    }
    expect(Tok::RParen);
    if (peek().kind == Tok::LBracket) {
      take();
      auto first = integer();
      expect(Tok::DotDot);
      auto last = integer();
      expect(Tok::RBracket);
      c.slice = {first, last};
    }
    close_span(c, s);
    return c;
  }

  Expr call(Expr receiver, Span s) { return call(std::optional<Expr>(std::move(receiver)), s); }

  std::size_t integer() {
    const auto& t = peek();
    if (t.kind != Tok::Number || t.text.find('.') != std::string::npos)
      fail("expected integer", {"number"});
    std::size_t v = 0;
    std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    take();
    return v;
  }

  Expr arg() {
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Equals) {
      Span s = open_span();
      std::string key = take().text;
      take();
      Expr kw = Expr::kwarg(std::move(key), expr());
      close_span(kw, s);
      return kw;
    }
    return expr();
  }

  RelationPath relpath() {
    std::vector<RelationStep> steps;
    while (true) {
      if (peek().kind == Tok::RelId) {
        steps.push_back({take().text, false});
      } else if (peek().kind == Tok::Ident && peek().text == "inverse" && peek(1).kind == Tok::LParen) {
        take();
        take();
        auto inner = relpath().inverted();
        expect(Tok::RParen);
        steps.insert(steps.end(), inner.steps.begin(), inner.steps.end());
      } else {
        break;
      }
    }
    if (steps.empty()) fail("expected relation path", {"relation"});
    return RelationPath(std::move(steps));
  }

  Expr atom() {
    Span s = open_span();
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        if (t.text == "inverse" && peek(1).kind == Tok::LParen) return relpath_atom(s);
        if (peek(1).kind == Tok::LParen) return call(std::nullopt, s);
        Expr e = Expr::name(take().text);
        close_span(e, s);
        return e;
      }
      case Tok::RelId:
        return relpath_atom(s);
      case Tok::Number: {
        Expr e = Expr::number(take().text);
        close_span(e, s);
        return e;
      }
      case Tok::String: {
        Expr e = Expr::string(take().text);
        close_span(e, s);
        return e;
      }
      case Tok::Placeholder: {
        take();
        Expr e = Expr::placeholder();
        close_span(e, s);
        return e;
      }
      case Tok::LParen: {
        take();
        Expr e = expr();
        expect(Tok::RParen);
        return e;
      }
      case Tok::LBrace: {
        take();
        Expr e;
        e.kind = Expr::Kind::SetLit;
        if (peek().kind != Tok::RBrace) {
          do {
            if (peek().kind != Tok::Ident && peek().kind != Tok::Number)
              fail("expected set member", {"identifier"});
            e.items.push_back(take().text);
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBrace);
        close_span(e, s);
        return e;
      }
      default:
        fail("expected expression",
             {"identifier", "relation", "number", "string", "%item", "'('", "'{'"});
    }
  }

  Expr relpath_atom(Span s) {
    Expr e = Expr::relpath(relpath());
    if (accept(Tok::LBracket)) {
      e.kind = Expr::Kind::RelImage;
      e.args.push_back(expr());
      expect(Tok::RBracket);
    }
    close_span(e, s);
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_operator_name(std::string_view name) { return in(kOperators, name); }
bool is_predicate_name(std::string_view name) { return in(kPredicates, name); }
bool is_callable_name(std::string_view name) {
  return is_operator_name(name) || is_predicate_name(name) || in(kFunctions, name);
}

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.args == b.args && a.path == b.path &&
         a.items == b.items && a.slice == b.slice && a.bang == b.bang && a.chained == b.chained;
}

Expr Expr::name(std::string text) {
  Expr e;
  e.kind = Kind::Name;
  e.text = std::move(text);
  return e;
}

Expr Expr::number(std::string text) {
  Expr e;
  e.kind = Kind::Number;
  e.text = std::move(text);
  return e;
}

Expr Expr::string(std::string text) {
  Expr e;
  e.kind = Kind::String;
  e.text = std::move(text);
  return e;
}

Expr Expr::placeholder() {
  Expr e;
  e.kind = Kind::Placeholder;
  e.text = "%item";
  return e;
}

Expr Expr::relpath(RelationPath path) {
  Expr e;
  e.kind = Kind::RelPath;
  e.path = std::move(path);
  return e;
}

Expr Expr::call(std::string callee, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::Call;
  e.text = std::move(callee);
  e.args = std::move(args);
  return e;
}

Expr Expr::kwarg(std::string key, Expr value) {
  Expr e;
  e.kind = Kind::KwArg;
  e.text = std::move(key);
  e.args.push_back(std::move(value));
  return e;
}

Expr parse_expression(std::string_view text) { return Parser(text).expression_only(); }

Script parse_script(std::string_view text) { return Parser(text).script(); }

}  // namespace xplore::dsl
