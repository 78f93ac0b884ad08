#include "xplore/mapping.hpp"

#include <cmath>

#include "xplore/errors.hpp"

namespace xplore {

namespace {

// Integer result when every operand is an integer and the value is integral.
Item numeric_item(double value, bool all_int) {
  if (all_int && std::nearbyint(value) == value && std::abs(value) < 9.0e15)
    return Item::integer(static_cast<std::int64_t>(value));
  return Item::real(value);
}

const Item& first_or_self(const std::vector<Item>& image, const Item& self) {
  return image.empty() ? self : image.front();
}

}  // namespace

Transform Transform::identity() {
  return {"identity", [](const Item& item, const RelationCatalog&) { return item; }};
}

Transform Transform::numeric(NumExpr expr) {
  std::string name = expr.to_string();
  return {std::move(name), [expr = std::move(expr)](const Item& item, const RelationCatalog& catalog) {
            auto v = expr.evaluate(NumContext{item, catalog, std::nullopt});
            if (!v) throw EvalError("mapping of '" + item.id() + "' has no value");
            return Item::real(*v);
          }};
}

Transform Transform::via(RelationPath path) {
  std::string name = path.to_string();
  return {std::move(name), [path = std::move(path)](const Item& item, const RelationCatalog& catalog) {
            auto image = path_image(catalog, path, item);
            return first_or_self(image, item);
          }};
}

// ---------------------------------------------------------------------------

std::optional<Aggregation> Aggregation::named(std::string_view name) {
  if (name == "count") return count();
  if (name == "sum") return sum();
  if (name == "mean") return mean();
  return std::nullopt;
}

std::string_view Aggregation::name() const {
  switch (kind) {
    case Kind::Count: return "count";
    case Kind::Sum: return "sum";
    case Kind::Mean: return "mean";
  }
  return "count";
}

Item Aggregation::fold(std::span<const Item> children) const {
  struct Acc {
    double value = 0;
    std::size_t count = 0;
    bool all_int = true;
  } acc;
  for (auto it = children.rbegin(); it != children.rend(); ++it) {
    ++acc.count;
    if (kind == Kind::Count) continue;
    if (!it->is_numeric())
      throw EvalError(std::string(name()) + " over non-numeric item '" + it->id() + "'");
    acc.value += it->number();
    acc.all_int = acc.all_int && it->kind() == ItemKind::Int;
  }
  switch (kind) {
    case Kind::Count:
      return Item::integer(static_cast<std::int64_t>(acc.count));
    case Kind::Sum:
      return numeric_item(acc.value, acc.all_int);
    case Kind::Mean:
      if (acc.count == 0) throw EvalError("mean of an empty children set");
      return Item::real(acc.value / static_cast<double>(acc.count));
  }
  return Item::integer(0);
}

// ---------------------------------------------------------------------------

namespace {

Combination numeric_combination(std::string name, std::size_t arity, bool multiply) {
  return {std::move(name), arity, [multiply](std::span<const Item> items, const RelationCatalog&) {
            double value = multiply ? 1 : 0;
            bool all_int = true;
            for (const auto& item : items) {
              if (!item.is_numeric())
                throw EvalError("combination over non-numeric item '" + item.id() + "'");
              value = multiply ? value * item.number() : value + item.number();
              all_int = all_int && item.kind() == ItemKind::Int;
            }
            return numeric_item(value, all_int);
          }};
}

}  // namespace

Combination Combination::product(std::size_t arity) {
  return numeric_combination("product", arity, true);
}

Combination Combination::sum(std::size_t arity) { return numeric_combination("sum", arity, false); }

std::optional<Combination> Combination::named(std::string_view name, std::size_t arity) {
  if (name == "product") return product(arity);
  if (name == "sum") return sum(arity);
  return std::nullopt;
}

Selector Selector::at(std::vector<std::vector<std::size_t>> tuples) {
  Selector s;
  s.arity = tuples.empty() ? 0 : tuples.front().size();
  for (const auto& t : tuples)
    if (t.size() != s.arity) throw EvalError("selector tuples have different sizes");
  s.positions = std::move(tuples);
  return s;
}

std::vector<std::vector<Item>> Selector::tuples(std::span<const Item> children) const {
  std::vector<std::vector<Item>> out;
  if (!positions.empty()) {
    for (const auto& tuple : positions) {
      std::vector<Item> items;
      bool ok = true;
      for (auto i : tuple) {
        if (i >= children.size()) {
          ok = false;
          break;
        }
        items.push_back(children[i]);
      }
      if (ok) out.push_back(std::move(items));
    }
    return out;
  }
  if (children.empty() || arity == 0) return out;
  std::vector<std::size_t> index(arity, 0);
  while (true) {
    std::vector<Item> items;
    items.reserve(arity);
    for (auto i : index) items.push_back(children[i]);
    out.push_back(std::move(items));
    std::size_t k = arity;
    while (k > 0 && ++index[k - 1] == children.size()) index[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

EdgeTransform EdgeTransform::identity() {
  return {"identity", [](const Edge& e, const RelationCatalog&) { return e; }};
}

EdgeTransform EdgeTransform::via(RelationPath path) {
  std::string name = path.to_string();
  return {std::move(name), [path = std::move(path)](const Edge& e, const RelationCatalog& catalog) {
            auto a = path_image(catalog, path, e.first);
            auto b = path_image(catalog, path, e.second);
            return Edge{first_or_self(a, e.first), first_or_self(b, e.second)};
          }};
}

EdgeFold EdgeFold::length() {
  return {"length", [](const Edge& e, const std::optional<Edge>& acc) {
            std::int64_t n = acc ? static_cast<std::int64_t>(acc->second.number()) + 1 : 1;
            return Edge{e.first, Item::integer(n)};
          }};
}

EdgeFold EdgeFold::span() {
  return {"span", [](const Edge& e, const std::optional<Edge>& acc) {
            return Edge{e.first, acc ? acc->second : e.second};
          }};
}

std::optional<EdgeFold> EdgeFold::named(std::string_view name) {
  if (name == "length") return length();
  if (name == "span") return span();
  return std::nullopt;
}

EdgeCombination EdgeCombination::endpoints() {
  return {"endpoints", [](std::span<const Edge> edges) {
            return Edge{edges.front().first, edges.back().second};
          }};
}

EdgeCombination EdgeCombination::length() {
  return {"length", [](std::span<const Edge> edges) {
            return Edge{edges.front().first, Item::integer(static_cast<std::int64_t>(edges.size()))};
          }};
}

std::optional<EdgeCombination> EdgeCombination::named(std::string_view name) {
  if (name == "endpoints") return endpoints();
  if (name == "length") return length();
  return std::nullopt;
}

}  // namespace xplore
