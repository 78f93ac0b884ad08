#pragma once

// Machine-readable forms of the analysis reports, as JSON text.

#include <string>

#include "xplore/grammar.hpp"
#include "xplore/ingest.hpp"
#include "xplore/profile.hpp"

namespace xplore {

std::string report_json(const GrammarComparison& c);
std::string report_json(const ProfileComparison& c);
std::string report_json(const SchemaSummary& s);
std::string report_json(const Skeleton& skeleton, const Derivation& d);

}  // namespace xplore
