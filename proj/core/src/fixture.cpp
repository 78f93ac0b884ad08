#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "xplore/errors.hpp"
#include "xplore/ingest.hpp"

namespace xplore {

namespace {

struct Publication {
  std::string id;
  std::string title;
  std::int64_t year = 0;
  std::vector<std::size_t> authors;
  std::size_t venue = 0;
  std::vector<std::size_t> cites;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

  /// k distinct values from [0, n), in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    k = std::min(k, n);
    while (out.size() < k) {
      auto v = below(n);
      if (seen.insert(v).second) out.push_back(v);
    }
    return out;
  }

  std::string title(bool semantic_web) {
    static const std::array<const char*, 8> lead{"Scalable", "Efficient", "Interactive", "Adaptive",
                                                 "Incremental", "Robust", "Declarative", "Federated"};
    static const std::array<const char*, 8> topic{"Query Processing", "Data Integration", "Entity Linking",
                                                  "Graph Analytics", "Information Retrieval",
                                                  "Ontology Matching", "Data Provenance", "Faceted Search"};
    std::string t = std::string(lead[below(lead.size())]) + " " + topic[below(topic.size())];
    if (semantic_web) return chance(50) ? t + " for the Semantic Web" : "Semantic Web " + t;
    return t + " in " + topic[below(topic.size())];
  }

 private:
  std::mt19937_64 rng_;
};

bool shares(const std::vector<std::size_t>& a, const std::set<std::size_t>& b) {
  return std::any_of(a.begin(), a.end(), [&](std::size_t x) { return b.count(x) > 0; });
}

}  // namespace

CitationFixture build_citation_fixture(std::uint64_t seed, std::size_t scale) {
  if (scale < 50 || scale > 5000)
    throw Error("citation fixture scale must be in [50, 5000], got " + std::to_string(scale));
  Generator gen(seed);
  const std::size_t n_authors = std::max<std::size_t>(12, scale / 4);
  const std::size_t n_venues = std::max<std::size_t>(5, scale / 25);

  // Index scale - 1 is the paper under review; everything else is older.
  std::vector<Publication> pubs(scale);
  for (std::size_t i = 0; i < scale; ++i) {
    auto& pub = pubs[i];
    pub.id = i + 1 == scale ? "p" : "pub" + std::to_string(i + 1);
    pub.year = 1990 + static_cast<std::int64_t>(i * 30 / scale + gen.below(3));
    pub.title = gen.title(gen.chance(30));
    pub.authors = gen.sample(n_authors, 1 + gen.below(4));
    pub.venue = gen.below(n_venues);
    if (i > 0) pub.cites = gen.sample(i, gen.below(std::min<std::size_t>(i, 12) + 1));
  }

  auto& p = pubs.back();
  p.year = 2022;
  p.title = "Exploring Linked Data on the Semantic Web";
  p.authors = gen.sample(n_authors, 3);
  p.cites = gen.sample(scale - 1, 25);
  // Plant self-citations and same-venue citations among the references.
  for (std::size_t k = 0; k < 4; ++k) {
    auto& cited = pubs[p.cites[k]].authors;
    auto mine = p.authors[k % p.authors.size()];
    if (std::find(cited.begin(), cited.end(), mine) == cited.end()) cited.push_back(mine);
  }
  for (std::size_t k = 4; k < 10; ++k) pubs[p.cites[k]].venue = p.venue;

  CitationFixture fx;
  fx.seed = seed;
  fx.scale = scale;
  auto& d = fx.dataset;
  const auto type = [](const char* t) { return Item::entity(t); };
  const auto author = [](std::size_t a) { return Item::entity("author" + std::to_string(a + 1)); };
  const auto venue = [](std::size_t v) { return Item::entity("venue" + std::to_string(v + 1)); };
  for (std::size_t a = 0; a < n_authors; ++a) d.add_pair(":type", author(a), type("Author"));
  for (std::size_t v = 0; v < n_venues; ++v) {
    d.add_pair(":type", venue(v), type("Venue"));
    d.set_label(venue(v).id(), "Venue " + std::to_string(v + 1));
  }
  for (std::size_t i = 0; i < scale; ++i) {
    const auto& pub = pubs[i];
    auto item = Item::entity(pub.id);
    d.add_pair(":type", item, type("Publication"));
    d.set_label(pub.id, pub.title);
    d.add_pair(":year", item, Item::integer(pub.year));
    for (auto c : pub.cites) d.add_pair(":cite", item, Item::entity(pubs[c].id));
    std::size_t role = 0;
    auto hold = [&](const Item& holder) {
      auto r = Item::entity("r" + std::to_string(i + 1) + "_" + std::to_string(++role));
      d.add_pair(":isContextFor", item, r);
      d.add_pair(":isHeldBy", r, holder);
    };
    for (auto a : pub.authors) hold(author(a));
    hold(venue(pub.venue));
  }

  fx.paper = Item::entity("p");
  std::set<std::int64_t> years;
  std::set<std::size_t> own(p.authors.begin(), p.authors.end());
  std::set<std::size_t> group;
  for (const auto& pub : pubs)
    if (shares(pub.authors, own)) group.insert(pub.authors.begin(), pub.authors.end());
  for (auto c : p.cites) {
    const auto& cited = pubs[c];
    fx.citations.push_back(Item::entity(cited.id));
    years.insert(cited.year);
    fx.self_citations += shares(cited.authors, own);
    fx.same_venue_citations += cited.venue == p.venue;
    fx.group_citations += shares(cited.authors, group);
  }
  double sum = 0;
  for (auto y : years) sum += static_cast<double>(y);
  fx.mean_citation_year = sum / static_cast<double>(years.size());
  return fx;
}

}  // namespace xplore
