#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snowball/feature_model.hpp"
#include "snowball/signatures.hpp"

namespace snowball {

// Fine feature matching: McGregor-style bounded-backtracking search for the
// maximum common induced subgraph of two code-attributed dependency graphs,
// plus a brute-force oracle used to verify it.

struct AttributedDependencyGraph {
  std::vector<std::string> ids;   // node order = feature history order
  std::vector<int> codes;         // per node
  std::vector<std::pair<int, int>> edges;      // directed (parent, child) indices
  std::vector<std::vector<std::uint8_t>> adj;  // adj[i][j] == 1 iff edge i -> j

  std::size_t node_count() const { return ids.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

/// Structure-preserving translation of a model into a code-attributed graph.
/// Throws DataError naming the feature when `codes` misses one.
AttributedDependencyGraph build_graph(const FeatureModel& model,
                                      const std::map<std::string, int>& codes);

/// Detail classification: explicit hint wins; otherwise rounds, chamfers and
/// holes count as detail.
bool is_detail_feature(const Feature& f);

/// Remove detail features ahead of matching. A detail feature survives if any
/// of its transitive dependents is non-detail (removing it would orphan them).
/// Returns the simplified model and the removed ids in history order.
std::pair<FeatureModel, std::vector<std::string>> simplify(const FeatureModel& model);

struct SearchConfig {
  std::optional<int> depth_limit;  // unbounded when absent; >= 1 when set
  bool use_simplify = false;
  std::optional<std::uint64_t> node_budget;
};

struct MatchResult {
  /// One-to-one (id in A, id in B) pairs, sorted by the A id.
  std::vector<std::pair<std::string, std::string>> pairs;
  int matched_edge_count = 0;
  std::uint64_t iterations = 0;  // search nodes visited
  bool exact = true;             // false when depth commits or budget cut the search

  std::size_t cardinality() const { return pairs.size(); }
};

/// Maximum common induced subgraph over equal-code nodes. Objective: maximize
/// pair count, tie-break on larger matched edge count, then the first mapping
/// in canonical exploration order (A nodes in history order, B candidates in
/// ascending id order, skip last) — deterministic and shared with the oracle.
///
/// With depth_limit = d the search permanently commits a choice once d levels
/// have been explored beneath it (bounded backjumping); with a node budget it
/// returns the best mapping found so far with exact = false.
MatchResult mcs(const AttributedDependencyGraph& ga, const AttributedDependencyGraph& gb,
                const SearchConfig& cfg = {});

/// Exhaustive enumeration of every injective code-respecting induced-compatible
/// mapping; provably maximum with the same tie-break as mcs. Throws DataError
/// when either graph exceeds `max_nodes`.
MatchResult mcs_exact_oracle(const AttributedDependencyGraph& ga,
                             const AttributedDependencyGraph& gb,
                             std::size_t max_nodes = 10);

/// The full two-stage pipeline: optional simplification, hierarchical rough
/// matching, graph construction, fine matching. Pairs reference the original
/// feature ids.
MatchResult max_common_features(const FeatureModel& a, const FeatureModel& b,
                                const SearchConfig& cfg = {});

}  // namespace snowball
