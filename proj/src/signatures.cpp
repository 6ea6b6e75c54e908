#include "snowball/signatures.hpp"

#include <algorithm>
#include <map>

namespace snowball {

std::string criterion_token(Criterion c) {
  switch (c) {
    case Criterion::FeatureType: return "feature_type";
    case Criterion::FeatureSubtype: return "feature_subtype";
    case Criterion::FaceGraph: return "face_graph";
    case Criterion::SketchTopology: return "sketch_topology";
    case Criterion::SketchEdges: return "sketch_edges";
  }
  return "";
}

namespace {

const char kNoSketch[] = "no-sketch";

// Isomorphism-invariant certificate: equal for isomorphic graphs by
// construction (every component is a sorted multiset of per-face invariants).
// Distinct graphs may rarely collide; fine matching treats codes only as a
// compatibility pre-filter, so a collision costs time, never correctness.
std::string face_graph_certificate(const AttributedFaceGraph& g) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.faces.size(); ++i) index[g.faces[i].id] = i;

  std::vector<std::vector<int>> incident(g.faces.size());
  for (const auto& adj : g.adjacencies) {
    auto a = index.find(adj.a), b = index.find(adj.b);
    if (a == index.end() || b == index.end()) continue;
    incident[a->second].push_back(static_cast<int>(adj.convexity));
    incident[b->second].push_back(static_cast<int>(adj.convexity));
  }

  std::vector<std::string> tuples;
  tuples.reserve(g.faces.size());
  for (std::size_t i = 0; i < g.faces.size(); ++i) {
    std::sort(incident[i].begin(), incident[i].end());
    std::string t = surface_class_token(g.faces[i].surface) + ":" +
                    std::to_string(g.faces[i].genus) + ":";
    bool first = true;
    for (int c : incident[i]) {
      if (!first) t += ',';
      t += convexity_token(static_cast<Convexity>(c));
      first = false;
    }
    tuples.push_back(std::move(t));
  }
  std::sort(tuples.begin(), tuples.end());

  std::string cert = "F" + std::to_string(g.faces.size()) + "A" +
                     std::to_string(g.adjacencies.size());
  for (const auto& t : tuples) {
    cert += '|';
    cert += t;
  }
  return cert;
}

}  // namespace

SignatureValue criterion_value(const Feature& f, Criterion c) {
  switch (c) {
    case Criterion::FeatureType:
      return {c, feature_type_token(f.type, f.type_tag)};
    case Criterion::FeatureSubtype:
      return {c, feature_subtype_token(f.subtype, f.subtype_tag)};
    case Criterion::FaceGraph:
      return {c, face_graph_certificate(f.face_graph)};
    case Criterion::SketchTopology:
      if (!f.sketch) return {c, kNoSketch};
      return {c, sketch_topology_token(f.sketch->topology)};
    case Criterion::SketchEdges:
      if (!f.sketch) return {c, kNoSketch};
      return {c, std::to_string(f.sketch->linear_edge_count) + "," +
                     std::to_string(f.sketch->curved_edge_count)};
  }
  return {c, ""};
}

namespace {

constexpr char kChainSep = '\x1f';

// One linear pass over the in-scope features of both models. Buckets are
// keyed by exact payload bytes (the map is the "hash with deterministic
// collision resolution": lookup hashes, equality compares payloads).
BucketSet distribute(const FeatureModel& a, const FeatureModel& b, Criterion c,
                     const std::vector<const Feature*>& in_a,
                     const std::vector<const Feature*>& in_b, const std::string& chain_prefix) {
  BucketSet out;
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> groups;
  (void)a;
  (void)b;
  for (const Feature* f : in_a) {
    ++out.signature_evaluations;
    groups[criterion_value(*f, c).payload].first.push_back(f->id);
  }
  for (const Feature* f : in_b) {
    ++out.signature_evaluations;
    groups[criterion_value(*f, c).payload].second.push_back(f->id);
  }
  out.buckets.reserve(groups.size());
  int index = 0;
  for (auto& [payload, members] : groups) {
    Bucket bucket;
    bucket.index = index++;
    bucket.payload = chain_prefix.empty() ? payload : chain_prefix + kChainSep + payload;
    bucket.sub_a = std::move(members.first);
    bucket.sub_b = std::move(members.second);
    out.buckets.push_back(std::move(bucket));
  }
  return out;
}

std::vector<const Feature*> scope_features(const FeatureModel& m,
                                           const std::vector<std::string>& ids) {
  std::vector<const Feature*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const Feature* f = m.find(id);
    if (f) out.push_back(f);
  }
  return out;
}

std::vector<const Feature*> all_features(const FeatureModel& m) {
  std::vector<const Feature*> out;
  out.reserve(m.features.size());
  for (const auto& f : m.features) out.push_back(&f);
  return out;
}

}  // namespace

BucketSet rough_match(const FeatureModel& a, const FeatureModel& b, Criterion c,
                      const Bucket* scope) {
  if (!scope) return distribute(a, b, c, all_features(a), all_features(b), "");
  return distribute(a, b, c, scope_features(a, scope->sub_a), scope_features(b, scope->sub_b),
                    scope->payload);
}

HierarchicalResult hierarchical_match(const FeatureModel& a, const FeatureModel& b,
                                      std::span<const Criterion> criteria) {
  HierarchicalResult result;
  if (criteria.empty()) return result;

  std::vector<Bucket> current;
  for (std::size_t stage = 0; stage < criteria.size(); ++stage) {
    const Criterion c = criteria[stage];
    StageStats stats{c, 0, 0};
    std::vector<Bucket> next;
    if (stage == 0) {
      BucketSet bs = rough_match(a, b, c);
      stats.in_scope = a.features.size() + b.features.size();
      stats.evaluations = bs.signature_evaluations;
      next = std::move(bs.buckets);
    } else {
      for (const Bucket& bucket : current) {
        BucketSet bs = rough_match(a, b, c, &bucket);
        stats.in_scope += bucket.sub_a.size() + bucket.sub_b.size();
        stats.evaluations += bs.signature_evaluations;
        for (auto& nb : bs.buckets) next.push_back(std::move(nb));
      }
    }
    // Deterministic bucket order at every stage: sorted by payload chain.
    std::sort(next.begin(), next.end(),
              [](const Bucket& x, const Bucket& y) { return x.payload < y.payload; });
    for (std::size_t i = 0; i < next.size(); ++i) next[i].index = static_cast<int>(i);
    current = std::move(next);
    result.stages.push_back(stats);
    result.final_buckets.signature_evaluations += stats.evaluations;
  }

  for (const Bucket& bucket : current) {
    for (const auto& id : bucket.sub_a) result.codes.a[id] = bucket.index;
    for (const auto& id : bucket.sub_b) result.codes.b[id] = bucket.index;
  }
  result.final_buckets.buckets = std::move(current);
  return result;
}

std::uint64_t payload_digest(const std::string& payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace snowball
