#pragma once

#include <json.hpp>

#include "xplore/grammar.hpp"
#include "xplore/ingest.hpp"
#include "xplore/profile.hpp"
#include "xplore/session.hpp"

namespace xplore::render {

using json = nlohmann::json;

json item(const Item& item, const RelationCatalog& catalog);
/// Level-2 children [offset, offset + limit) with their subtrees nested
/// under "children", in child order.
json page(const ExplorationSet& set, const RelationCatalog& catalog, std::size_t offset, std::size_t limit);
json trail(const Trail& trail);
json schema(const SchemaSummary& summary);
json derivation(const Skeleton& skeleton, const Derivation& d);
json comparison(const GrammarComparison& c);
json comparison(const ProfileComparison& c);

}  // namespace xplore::render
