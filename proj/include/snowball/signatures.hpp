#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"

namespace snowball {

// Rough feature matching: five dimension-free comparison criteria and the
// hierarchical bucket subdivision that turns two feature lists into candidate
// pairs in a single pass per criterion. Features share a bucket iff their
// payloads are byte-identical; payload equality, not hash equality, defines
// membership.

enum class Criterion {
  FeatureType,     // basic type (datum, protrusion, cut, ...)
  FeatureSubtype,  // construction subtype (extrude, revolve, ...)
  FaceGraph,       // isomorphism-invariant certificate of the face graph
  SketchTopology,  // loop topology class of the 2D sketch
  SketchEdges,     // linear/curved edge counts of the 2D sketch
};

inline constexpr std::array<Criterion, 5> kDefaultCriteria = {
    Criterion::FeatureType, Criterion::FeatureSubtype, Criterion::FaceGraph,
    Criterion::SketchTopology, Criterion::SketchEdges};

std::string criterion_token(Criterion c);

struct SignatureValue {
  Criterion criterion;
  std::string payload;  // canonical bytes; equal inputs yield identical payloads

  bool operator==(const SignatureValue&) const = default;
};

/// Canonical payload of one criterion for one feature. Sketchless features
/// get the distinguished "no-sketch" payload for the sketch criteria. The
/// face-graph payload is an isomorphism-invariant certificate: sorted multiset
/// of per-face (surface class, genus, sorted incident convexities) tuples plus
/// face and adjacency counts.
SignatureValue criterion_value(const Feature& f, Criterion c);

struct Bucket {
  int index = 0;
  std::string payload;  // payload chain identifying this bucket across stages
  std::vector<std::string> sub_a;  // feature ids from model A, history order
  std::vector<std::string> sub_b;  // feature ids from model B, history order

  bool matched() const { return !sub_a.empty() && !sub_b.empty(); }
};

struct BucketSet {
  std::vector<Bucket> buckets;  // sorted by payload; index == position
  std::size_t signature_evaluations = 0;
};

/// Distribute the in-scope features of both models into buckets under one
/// criterion. When `scope` is given only the features inside it are
/// redistributed and the bucket payload chain extends the scope's.
BucketSet rough_match(const FeatureModel& a, const FeatureModel& b, Criterion c,
                      const Bucket* scope = nullptr);

struct StageStats {
  Criterion criterion;
  std::size_t in_scope = 0;     // features redistributed at this stage (both models)
  std::size_t evaluations = 0;  // criterion_value calls performed
};

struct FeatureCodes {
  std::map<std::string, int> a;  // feature id -> code, model A side
  std::map<std::string, int> b;
};

struct HierarchicalResult {
  BucketSet final_buckets;
  FeatureCodes codes;
  std::vector<StageStats> stages;
};

/// Apply rough_match per criterion to every bucket of the previous stage.
/// Final buckets with an empty side are retained (their features simply have
/// no candidates). Codes are consecutive integers in sorted-payload order;
/// two features receive the same code iff they ended in the same final bucket.
HierarchicalResult hierarchical_match(const FeatureModel& a, const FeatureModel& b,
                                      std::span<const Criterion> criteria = kDefaultCriteria);

/// FNV-1a digest of a payload, used by the bucket dump.
std::uint64_t payload_digest(const std::string& payload);

}  // namespace snowball
