#pragma once

// Textual exploration language: AST, parser and canonical printer.
//
//   script   := { stmt (";" | newline) }
//   stmt     := [ident "="] expr
//   expr     := term { ("+" | "-") term }
//   term     := unary { "*" unary }
//   unary    := "-" unary | postfix
//   postfix  := atom { "." call } [ "!" ]
//   atom     := ident | call | setlit | relpath [ "[" expr "]" ] | number | string
//             | "%item" | "(" expr ")"
//   call     := name "(" [arg { "," arg }] ")" [ "[" int ".." int "]" ]
//   arg      := ident "=" expr | expr
//   relpath  := segment { segment },  segment := ":" ident | "inverse" "(" relpath ")"
//   setlit   := "{" [ident { "," ident }] "}"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xplore/model.hpp"

namespace xplore::dsl {

struct Span {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
};

struct Expr {
  enum class Kind {
    Name,         // text = identifier
    Call,         // text = callee; chained calls keep the receiver in args[0]
    SetLit,       // items
    RelPath,      // path
    RelImage,     // path applied to args[0], e.g. :Year[%item]
    Number,       // text = literal as written
    String,       // text = unescaped value
    Placeholder,  // %item
    KwArg,        // text = keyword, args[0] = value
    Unary,        // text = "-", args[0]
    Binary,       // text = "+", "-" or "*", args[0] and args[1]
  };

  Kind kind = Kind::Name;
  std::string text;
  std::vector<Expr> args;
  RelationPath path;
  std::vector<std::string> items;
  std::optional<std::pair<std::size_t, std::size_t>> slice;
  bool bang = false;
  bool chained = false;
  Span span;

  /// Structural equality; spans are ignored.
  friend bool operator==(const Expr& a, const Expr& b);

  static Expr name(std::string text);
  static Expr number(std::string text);
  static Expr string(std::string text);
  static Expr placeholder();
  static Expr relpath(RelationPath path);
  static Expr call(std::string callee, std::vector<Expr> args);
  static Expr kwarg(std::string key, Expr value);

  bool is_call(std::string_view callee) const { return kind == Kind::Call && text == callee; }
};

struct Statement {
  std::optional<std::string> target;
  Expr expr;
  Span span;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.target == b.target && a.expr == b.expr;
  }
};

struct Script {
  std::vector<Statement> statements;
};

/// Exploration operators, including the `union` spelling of unite.
bool is_operator_name(std::string_view name);
/// Filter predicate constructors.
bool is_predicate_name(std::string_view name);
/// Every name that may appear before "(".
bool is_callable_name(std::string_view name);

/// Parses one expression (the whole input). Throws ParseError.
Expr parse_expression(std::string_view text);
/// Parses a script. Throws ParseError.
Script parse_script(std::string_view text);

/// Canonical text; parse_expression(print(e)) == e.
std::string print(const Expr& e);
std::string print(const Statement& s);
std::string print(const Script& s);

}  // namespace xplore::dsl
