#pragma once

// Tactical profiles: which operations a tool offers and which arguments each
// one admits, plus a diff report between two profiles.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xplore {

/// Attributes of one available operation. Unset attributes do not apply.
struct OperationProfile {
  std::optional<std::string> cardinality;        // one-to-one | one-to-many | many-to-many
  std::set<std::string> data_type;               // data, metadata
  std::set<std::string> relation_type;           // schema, computed
  std::optional<std::string> relation_structure;  // single | path-any | path-fixed
  std::set<std::string> match_type;              // exact, approximate
  std::set<std::string> mapping_kinds;           // aggregation, combination, transformation

  bool operator==(const OperationProfile&) const = default;
};

struct TacticalProfile {
  std::string tool;
  std::map<std::string, OperationProfile> operations;

  /// Key/value lines:
  ///   tool = gfacet
  ///   operations = pivot, refine
  ///   pivot.cardinality = many-to-many
  ///   refine.relationType = schema, computed
  /// Mentioning an attribute of an operation declares the operation.
  /// Throws Error on unknown operations, attributes or values.
  static TacticalProfile parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const TacticalProfile&) const = default;
};

/// The operation and attribute names a profile may use.
const std::vector<std::string>& profile_operations();
const std::vector<std::string>& profile_attributes();
/// Allowed values of an attribute; empty for unknown attribute names.
const std::vector<std::string>& profile_vocabulary(std::string_view attribute);

struct AttributeDifference {
  std::string operation;
  std::string attribute;
  std::vector<std::string> a;
  std::vector<std::string> b;
};

struct ProfileComparison {
  std::string tool_a;
  std::string tool_b;
  std::vector<std::string> only_a;  // operations
  std::vector<std::string> only_b;
  std::vector<AttributeDifference> differences;  // operations in both only

  bool empty() const noexcept { return only_a.empty() && only_b.empty() && differences.empty(); }
  /// One finding per line.
  std::string to_string() const;
};

ProfileComparison compare_profiles(const TacticalProfile& a, const TacticalProfile& b);

}  // namespace xplore
