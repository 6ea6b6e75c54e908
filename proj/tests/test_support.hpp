#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"
#include "snowball/matching.hpp"

namespace snowball::test {

inline Feature plain_feature(const std::string& id, FeatureType type = FeatureType::Protrusion,
                             FeatureSubtype subtype = FeatureSubtype::Extrude) {
  Feature f;
  f.id = id;
  f.type = type;
  f.subtype = subtype;
  if (type != FeatureType::Datum) {
    f.face_graph.faces = {{"F0", SurfaceClass::Plane, 0}, {"F1", SurfaceClass::Cylinder, 0}};
    f.face_graph.adjacencies = {{"F0", "F1", Convexity::Convex}};
  }
  return f;
}

/// f0 -> f1 -> f2 chain with distinct attributes per feature.
inline FeatureModel chain_model(const std::string& model_id = "chain") {
  FeatureModel m;
  m.model_id = model_id;
  m.features.push_back(plain_feature("f0", FeatureType::Datum, FeatureSubtype::None));
  m.features.push_back(plain_feature("f1", FeatureType::Protrusion));
  m.features.push_back(plain_feature("f2", FeatureType::Cut, FeatureSubtype::Revolve));
  m.add_dependency("f0", "f1");
  m.add_dependency("f1", "f2");
  return m;
}

/// Checks every MatchResult invariant: injectivity, equal codes, induced
/// edge compatibility over all pair pairs.
inline void require_valid_match(const AttributedDependencyGraph& ga,
                                const AttributedDependencyGraph& gb, const MatchResult& r,
                                bool* ok, std::string* why) {
  *ok = true;
  auto fail = [&](const std::string& msg) {
    *ok = false;
    *why = msg;
  };
  std::map<std::string, std::size_t> pos_a, pos_b;
  for (std::size_t i = 0; i < ga.ids.size(); ++i) pos_a[ga.ids[i]] = i;
  for (std::size_t i = 0; i < gb.ids.size(); ++i) pos_b[gb.ids[i]] = i;

  std::set<std::string> seen_a, seen_b;
  for (const auto& [ia, ib] : r.pairs) {
    if (!pos_a.count(ia) || !pos_b.count(ib)) return fail("pair references unknown node");
    if (!seen_a.insert(ia).second || !seen_b.insert(ib).second)
      return fail("mapping is not one-to-one");
    if (ga.codes[pos_a[ia]] != gb.codes[pos_b[ib]]) return fail("pair codes differ");
  }
  int edges = 0;
  for (const auto& [a1, b1] : r.pairs) {
    for (const auto& [a2, b2] : r.pairs) {
      const std::uint8_t ea = ga.adj[pos_a[a1]][pos_a[a2]];
      const std::uint8_t eb = gb.adj[pos_b[b1]][pos_b[b2]];
      if (ea != eb) return fail("induced compatibility violated");
      edges += ea;
    }
  }
  if (edges != r.matched_edge_count) return fail("matched_edge_count is wrong");
}

}  // namespace snowball::test
