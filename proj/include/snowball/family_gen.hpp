#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"

namespace snowball {

// Synthetic structural-family generator with planted ground truth: a shared
// core replicated into every member (parameters jittered, construction history
// identical) plus per-member detail features, some cloned across members.

struct GenConfig {
  int family_size = 2;
  int core_size = 8;
  int detail_min = 2;
  int detail_max = 4;
  double detail_overlap_probability = 0.3;  // chance a detail clones an existing one
  double param_jitter = 0.1;
  std::uint64_t rng_seed = 42;
};

struct DetailTruth {
  std::string model_id;
  std::string feature_id;
  int group = 0;  // clone group; one master copy per group is expected
};

struct FamilyTruth {
  std::vector<std::string> core_ids;  // shared across members
  FeatureModel core_model;            // the planted core as a standalone model
  std::vector<DetailTruth> details;
  int distinct_detail_count = 0;  // number of clone groups
};

struct GeneratedFamily {
  std::vector<FeatureModel> members;
  FamilyTruth truth;
};

/// Deterministic in cfg.rng_seed; every member passes validate and embeds the
/// planted core. Throws DataError on infeasible configs.
GeneratedFamily gen_family(const GenConfig& cfg);

/// A single random valid model (arbitrary types, graphs, sketches, edges);
/// used by property tests and the oracle-equivalence suite.
FeatureModel gen_random_model(std::uint64_t seed, int feature_count,
                              const std::string& model_id = "rnd");

std::string truth_to_json(const FamilyTruth& truth);
FamilyTruth truth_from_json(const std::string& text);

}  // namespace snowball
