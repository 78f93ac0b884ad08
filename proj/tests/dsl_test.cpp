#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "xplore/dsl.hpp"
#include "xplore/errors.hpp"

using namespace xplore;
using namespace xplore::dsl;

namespace {

TEST(DslParse, ChainedCallKeepsReceiver) {
  auto e = parse_expression("s1.pivot(:cite)");
  ASSERT_TRUE(e.is_call("pivot"));
  EXPECT_TRUE(e.chained);
  ASSERT_EQ(e.args.size(), 2u);
  EXPECT_EQ(e.args[0], Expr::name("s1"));
  EXPECT_EQ(e.args[1].path.to_string(), ":cite");
}

TEST(DslParse, RelationPathsAndInverse) {
  auto e = parse_expression(":isContextFor:isHeldBy");
  ASSERT_EQ(e.kind, Expr::Kind::RelPath);
  ASSERT_EQ(e.path.steps.size(), 2u);
  auto inv = parse_expression("inverse(:Author)");
  ASSERT_EQ(inv.kind, Expr::Kind::RelPath);
  EXPECT_TRUE(inv.path.steps[0].inverse);
}

TEST(DslParse, SliceAndBang) {
  auto e = parse_expression("d.rank(2, :swCites[%item])[0..19]");
  ASSERT_TRUE(e.slice);
  EXPECT_EQ(*e.slice, (std::pair<std::size_t, std::size_t>{0, 19}));
  EXPECT_EQ(e.args[2].kind, Expr::Kind::RelImage);
  EXPECT_EQ(e.args[2].args[0].kind, Expr::Kind::Placeholder);
  EXPECT_TRUE(parse_expression("s1.refine(equals(:type, Author))!").bang);
}

TEST(DslParse, ArithmeticPrecedence) {
  auto e = parse_expression("a + b * c - d");
  ASSERT_EQ(e.kind, Expr::Kind::Binary);
  EXPECT_EQ(e.text, "-");
  EXPECT_EQ(e.args[0].text, "+");
  EXPECT_EQ(e.args[0].args[1].text, "*");
}

TEST(DslParse, StatementsSeparators) {
  auto s = parse_script("s1 = p.pivot(:cite); s2 = s1.pivot(:year)\n\n# note\ns3 = s2.ahmap(mean)\n");
  ASSERT_EQ(s.statements.size(), 3u);
  EXPECT_EQ(s.statements[2].target, "s3");
  EXPECT_EQ(s.statements[2].span.line, 4u);
  EXPECT_TRUE(parse_script("").statements.empty());
}

TEST(DslParse, SpansPointAtSubexpression) {
  auto e = parse_expression("s1.pivot(:cite)");
  EXPECT_EQ(e.args[1].span.column, 10u);
  EXPECT_EQ(e.args[1].span.begin, 9u);
  EXPECT_EQ(e.args[1].span.end, 14u);
}

struct ErrorCase {
  const char* text;
  std::size_t line;
  std::size_t column;
  const char* expected;  // member of expected(), or nullptr
};

TEST(DslErrors, ReportPositionAndExpectation) {
  const ErrorCase cases[] = {
      {"s1 = d.pivot(:cite", 1, 19, "')'"},
      {"s1 = d.frobnicate(:cite)", 1, 8, nullptr},
      {"s1 = p.pivot(:cite)\ns2 = s1.", 2, 9, "identifier"},
      {"s1 = {a, }", 1, 10, "identifier"},
      {"s1 = d.rank(2, :x)[0..", 1, 23, nullptr},
      {"s1 = \"open", 1, 6, nullptr},
  };
  for (const auto& c : cases) {
    try {
      parse_script(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_EQ(e.column(), c.column) << c.text << ": " << e.what();
      if (c.expected) EXPECT_TRUE(e.expected().count(c.expected)) << c.text << ": " << e.what();
    }
  }
}

// Random ASTs in the shape the parser produces.
class AstGen {
 public:
  explicit AstGen(std::uint64_t seed) : rng_(seed) {}

  Expr set_expr(int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf_set();
    static const char* unary_ops[] = {"pivot", "refine", "group", "rank", "ahmap", "correlate"};
    static const char* binary_ops[] = {"unite", "intersect", "diff"};
    Expr c;
    if (pick(3) == 0) {
      c = Expr::call(binary_ops[pick(3)], {set_expr(depth - 1), set_expr(depth - 1)});
    } else {
      std::string op = unary_ops[pick(6)];
      std::vector<Expr> args{set_expr(depth - 1)};
      if (op == "pivot" || op == "group") args.push_back(relpath());
      if (op == "refine") args.push_back(predicate(2));
      if (op == "rank") {
        args.push_back(Expr::number(std::to_string(1 + pick(3))));
        args.push_back(value(2));
      }
      if (op == "ahmap") args.push_back(Expr::name(pick(2) ? "count" : "mean"));
      if (op == "correlate") args.push_back(Expr::kwarg("maxLength", Expr::number("3")));
      c = Expr::call(op, std::move(args));
    }
    c.chained = pick(2) == 0;
    if (pick(5) == 0) c.slice = std::pair<std::size_t, std::size_t>{pick(3), 3 + pick(5)};
    if (c.text == "refine" && pick(3) == 0) c.bang = true;
    return c;
  }

  Expr value(int depth) {
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(5)) {
        case 0: return Expr::number(number());
        case 1: return Expr::string(text());
        case 2: return Expr::placeholder();
        case 3: {
          Expr img;
          img.kind = Expr::Kind::RelImage;
          img.path = relpath().path;
          img.args.push_back(Expr::placeholder());
          return img;
        }
        default: return Expr::name(ident());
      }
    }
    if (pick(3) == 0) {
      Expr u;
      u.kind = Expr::Kind::Unary;
      u.text = "-";
      u.args.push_back(value(depth - 1));
      return u;
    }
    static const char* ops[] = {"+", "-", "*"};
    Expr b;
    b.kind = Expr::Kind::Binary;
    b.text = ops[pick(3)];
    b.args = {value(depth - 1), value(depth - 1)};
    return b;
  }

 private:
  std::size_t pick(std::size_t n) { return rng_() % n; }

  std::string ident() {
    static const char* names[] = {"p", "d", "s1", "s12", "irs", "Author", "x_y", "mean"};
    return names[pick(8)];
  }
  std::string number() {
    std::string n = std::to_string(pick(2000));
    if (pick(3) == 0) n += "." + std::to_string(1 + pick(9));
    if (pick(4) == 0) n = "-" + n;
    return n;
  }
  std::string text() {
    static const char* texts[] = {"Semantic Web", "", "a \"q\"", "back\\slash", "tab\there"};
    return texts[pick(5)];
  }

  Expr leaf_set() {
    if (pick(3) == 0) {
      Expr s;
      s.kind = Expr::Kind::SetLit;
      for (std::size_t i = pick(4); i > 0; --i) s.items.push_back("p" + std::to_string(pick(9)));
      return s;
    }
    return Expr::name(ident());
  }

  Expr relpath() {
    static const char* ids[] = {":cite", ":year", ":Author", ":isContextFor", ":isHeldBy"};
    RelationPath p;
    for (std::size_t i = 1 + pick(3); i > 0; --i) p.steps.push_back({ids[pick(5)], pick(4) == 0});
    return Expr::relpath(std::move(p));
  }

  Expr predicate(int depth) {
    if (depth > 0 && pick(3) == 0) {
      if (pick(2)) return Expr::call("not", {predicate(depth - 1)});
      return Expr::call(pick(2) ? "and" : "or", {predicate(depth - 1), predicate(depth - 1)});
    }
    switch (pick(3)) {
      case 0: return Expr::call("matchAll", {Expr::string(text())});
      case 1: return Expr::call("greaterThan", {relpath(), value(1)});
      default: return Expr::call("equals", {relpath(), leaf_set()});
    }
  }

  std::mt19937_64 rng_;
};

TEST(DslRoundTrip, GeneratedExpressions) {
  AstGen gen(20240611);
  for (int i = 0; i < 500; ++i) {
    Expr e = i % 4 == 3 ? gen.value(4) : gen.set_expr(4);
    auto text = print(e);
    Expr back;
    ASSERT_NO_THROW(back = parse_expression(text)) << text;
    ASSERT_EQ(back, e) << text << "\nreprinted: " << print(back);
  }
}

TEST(DslRoundTrip, GeneratedScripts) {
  AstGen gen(7);
  for (int i = 0; i < 50; ++i) {
    Script s;
    for (int k = 0; k < 5; ++k) s.statements.push_back({"s" + std::to_string(k + 1), gen.set_expr(3), {}});
    auto text = print(s);
    ASSERT_EQ(parse_script(text).statements, s.statements) << text;
  }
}

TEST(DslRoundTrip, RepositoryScripts) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(XPLORE_DATA_DIR "/scripts")) {
    if (entry.path().extension() != ".xpl") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    auto script = parse_script(buf.str());
    EXPECT_FALSE(script.statements.empty()) << entry.path();
    EXPECT_EQ(parse_script(print(script)).statements, script.statements) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 1u);
}

TEST(DslNames, Tables) {
  EXPECT_TRUE(is_operator_name("union"));
  EXPECT_TRUE(is_operator_name("chmap"));
  EXPECT_FALSE(is_operator_name("equals"));
  EXPECT_TRUE(is_predicate_name("equalsOne"));
  EXPECT_TRUE(is_callable_name("round"));
  EXPECT_FALSE(is_callable_name("frobnicate"));
}

}  // namespace
