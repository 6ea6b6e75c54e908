#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"
#include "snowball/matching.hpp"

namespace snowball {

// The rolling snowball: iterative find-then-merge over a family. The master
// accumulates every feature of every member exactly once; features matched in
// every iteration form the structural core.

struct Provenance {
  std::set<std::string> sources;  // model ids that contributed the feature
  int match_count = 0;            // iterations in which the feature was matched

  bool operator==(const Provenance&) const = default;
};

struct MasterModel {
  FeatureModel model;
  std::map<std::string, Provenance> provenance;  // feature id -> provenance
  int family_size = 1;

  /// Feature ids matched in every iteration so far.
  std::set<std::string> core_ids() const;
};

struct IterationRow {
  int iteration = 0;  // 1-based merge iteration
  std::string model_id;
  std::size_t common_count = 0;
  std::size_t master_size = 0;
  double elapsed_ms = 0.0;
};

struct CoreReport {
  std::vector<std::string> core_ids;  // sorted; the always-matched set
  std::vector<IterationRow> iterations;
  int smallest_iteration = 0;  // iteration with the minimum common-set size

  std::string to_csv() const;
};

/// Initialize a master from a single model (the first family member).
MasterModel init_master(const FeatureModel& first);

/// Unify the matched features into the master (provenance gains the source,
/// match counts increment) and append every unmatched feature of `m` with a
/// fresh "<model_id>.<id>" id, dependency parents remapped onto the master.
/// History order is the deterministic topological completion that keeps master
/// features first and appended features as late as possible. No feature of
/// `m` is dropped.
MasterModel merge(const MasterModel& master, const FeatureModel& m, const MatchResult& match);

/// Find-then-merge over the whole family, starting from the first two models.
/// Simplification stays off so detail duplicates are caught by matching.
std::pair<MasterModel, CoreReport> roll(const std::vector<FeatureModel>& family,
                                        const SearchConfig& cfg = {});

/// Submodel induced by features matched in every iteration. Throws DataError
/// naming the offending edge if a core feature depends on a non-core feature.
FeatureModel extract_core(const MasterModel& master);

struct OrderIndependenceReport {
  struct Row {
    std::vector<std::size_t> order;  // family indices in roll order
    std::size_t master_size = 0;
    std::size_t core_size = 0;
  };
  std::vector<Row> rows;
  bool masters_all_equal = false;
  bool cores_all_equal = false;
  std::size_t min_core_size = 0;
  std::optional<std::pair<std::size_t, std::size_t>> first_master_mismatch;
};

/// Roll every sampled permutation of the family (all of them up to `perm_cap`,
/// a seeded sample beyond) and compare the resulting masters pairwise under
/// canonical_equal. Per-permutation core sizes may differ; only the smallest
/// is authoritative.
OrderIndependenceReport check_order_independence(const std::vector<FeatureModel>& family,
                                                 const SearchConfig& cfg = {},
                                                 std::size_t perm_cap = 120,
                                                 std::uint64_t sample_seed = 42);

}  // namespace snowball
