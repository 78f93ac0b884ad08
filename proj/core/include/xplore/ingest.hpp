#pragma once

// Triple files, schema summaries and the built-in datasets.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xplore/model.hpp"

namespace xplore {

/// Tab-separated `subject relation object` lines; '#' comment lines and
/// blank lines are skipped. Objects follow the literal rules of
/// Item::from_token. The reserved relation `:label` attaches a display label
/// to the subject and registers it; a label equal to the id only registers.
/// Throws LoadError with the 1-based line number.
Dataset load_triples(std::string_view text);
Dataset load_triples_file(const std::string& path);

/// Sorted triple lines that load_triples reads back into an equal dataset.
std::string serialize_triples(const Dataset& dataset);

struct RelationSummary {
  std::string id;
  std::size_t pairs = 0;
  std::size_t domain_size = 0;
  std::size_t image_size = 0;
};

struct SchemaSummary {
  std::vector<RelationSummary> relations;  // by id
  std::size_t entities = 0;
  std::size_t literals = 0;

  std::string to_string() const;
};

SchemaSummary schema_summary(const Dataset& dataset);

/// The schema as data: one entity per relation id with the integer relations
/// :pairs, :domainSize and :imageSize, so the operators run on metadata.
Dataset schema_dataset(const Dataset& dataset);
/// Flat exploration set of the relation ids of schema_dataset.
ExplorationSet schema_set(const Dataset& dataset);

/// Publications p1..p4, authors a1..a3, affiliations f1..f3 with :Author and
/// :Affiliation. Every operator example is phrased against this dataset.
Dataset publications_dataset();

struct CitationFixture {
  Dataset dataset;
  Item paper;  // the designated paper `p`
  std::uint64_t seed = 0;
  std::size_t scale = 0;

  // Ground truth recorded while generating.
  std::vector<Item> citations;          // :cite[p]
  double mean_citation_year = 0;        // mean over the distinct years of the citations
  std::size_t self_citations = 0;       // citations sharing an author with p
  std::size_t same_venue_citations = 0; // citations held by p's venue
  std::size_t group_citations = 0;      // citations by p's authors or their co-authors
};

/// Deterministic synthetic citation corpus with `scale` publications
/// (p included). Relations: :cite, :year, :type, :isContextFor, :isHeldBy.
/// Publications reach their authors and venue through role items
/// (pub :isContextFor role :isHeldBy holder). Titles are labels; roughly a
/// third mention "Semantic Web". Throws Error when scale is outside
/// [50, 5000].
CitationFixture build_citation_fixture(std::uint64_t seed, std::size_t scale);

}  // namespace xplore
