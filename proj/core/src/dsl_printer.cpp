#include "xplore/dsl.hpp"

namespace xplore::dsl {

namespace {

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::Binary || e.bang) return 3;
  return e.text == "*" ? 2 : 1;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string print_bare(const Expr& e);

std::string print_receiver(const Expr& r) {
  bool wrap = r.kind == Expr::Kind::Binary || r.kind == Expr::Kind::Unary || r.bang ||
              (r.kind == Expr::Kind::Number && r.text.starts_with('-'));
  return wrap ? "(" + print(r) + ")" : print(r);
}

std::string print_call(const Expr& e) {
  std::string out;
  std::size_t first = 0;
  if (e.chained && !e.args.empty()) {
    out = print_receiver(e.args[0]) + ".";
    first = 1;
  }
  out += e.text + "(";
  for (std::size_t i = first; i < e.args.size(); ++i) {
    if (i > first) out += ", ";
    out += print(e.args[i]);
  }
  out += ")";
  if (e.slice) out += "[" + std::to_string(e.slice->first) + ".." + std::to_string(e.slice->second) + "]";
  return out;
}

std::string print_bare(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Number:
    case Expr::Kind::Placeholder:
      return e.text;
    case Expr::Kind::String:
      return quote(e.text);
    case Expr::Kind::RelPath:
      return e.path.to_string();
    case Expr::Kind::RelImage:
      return e.path.to_string() + "[" + print(e.args[0]) + "]";
    case Expr::Kind::KwArg:
      return e.text + "=" + print(e.args[0]);
    case Expr::Kind::SetLit: {
      std::string out = "{";
      for (std::size_t i = 0; i < e.items.size(); ++i) out += (i ? ", " : "") + e.items[i];
      return out + "}";
    }
    case Expr::Kind::Unary: {
      const auto& x = e.args[0];
      bool wrap = (x.kind == Expr::Kind::Binary && !x.bang) || x.kind == Expr::Kind::Number;
      return "-" + (wrap ? "(" + print(x) + ")" : print(x));
    }
    case Expr::Kind::Binary: {
      int p = precedence(e);
      const auto& l = e.args[0];
      const auto& r = e.args[1];
      std::string ls = precedence(l) < p ? "(" + print(l) + ")" : print(l);
      std::string rs = precedence(r) <= p ? "(" + print(r) + ")" : print(r);
      return ls + " " + e.text + " " + rs;
    }
    case Expr::Kind::Call:
      return print_call(e);
  }
  return {};
}

}  // namespace

std::string print(const Expr& e) {
  if (!e.bang) return print_bare(e);
  if (e.kind == Expr::Kind::Binary || e.kind == Expr::Kind::Unary || e.kind == Expr::Kind::KwArg)
    return "(" + print_bare(e) + ")!";
  return print_bare(e) + "!";
}

std::string print(const Statement& s) {
  return s.target ? *s.target + " = " + print(s.expr) : print(s.expr);
}

std::string print(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print(st) + "\n";
  return out;
}

}  // namespace xplore::dsl
