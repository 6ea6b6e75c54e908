#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace snowball {

// Neutral, kernel-free representation of a feature-based model history.
// Descriptors carry exactly the dimension-free information the matching
// criteria consume; no geometry is stored anywhere.

enum class FeatureType { Datum, Protrusion, Cut, Round, Chamfer, Hole, Pattern, Other };
enum class FeatureSubtype { Extrude, Revolve, Loft, Sweep, None, Other };
enum class SurfaceClass { Plane, Cylinder, Cone, Sphere, Torus, Freeform };
enum class Convexity { Convex, Concave, Smooth };
enum class SketchTopology { ClosedLoop, SingleNonClosedLoop, MultiClosedLoop, MultiNonClosedLoop };

// Token mapping for the interchange format. The "other" feature type/subtype
// carries a free-form tag and serializes as "other(<tag>)".
std::string feature_type_token(FeatureType t, const std::string& tag = "");
std::string feature_subtype_token(FeatureSubtype t, const std::string& tag = "");
std::string surface_class_token(SurfaceClass s);
std::string convexity_token(Convexity c);
std::string sketch_topology_token(SketchTopology t);

FeatureType feature_type_from_token(const std::string& token, std::string* tag = nullptr);
FeatureSubtype feature_subtype_from_token(const std::string& token, std::string* tag = nullptr);
SurfaceClass surface_class_from_token(const std::string& token);
Convexity convexity_from_token(const std::string& token);
SketchTopology sketch_topology_from_token(const std::string& token);

struct Face {
  std::string id;
  SurfaceClass surface = SurfaceClass::Plane;
  int genus = 0;

  auto operator<=>(const Face&) const = default;
};

/// Unordered face-face adjacency labeled with the shared edge's convexity.
struct FaceAdjacency {
  std::string a;
  std::string b;
  Convexity convexity = Convexity::Convex;

  auto operator<=>(const FaceAdjacency&) const = default;
};

/// Plain labeled undirected graph over a feature's faces.
struct AttributedFaceGraph {
  std::vector<Face> faces;
  std::vector<FaceAdjacency> adjacencies;

  bool empty() const { return faces.empty() && adjacencies.empty(); }
  bool operator==(const AttributedFaceGraph&) const = default;
};

struct SketchDescriptor {
  SketchTopology topology = SketchTopology::ClosedLoop;
  int loop_count = 1;
  int linear_edge_count = 0;
  int curved_edge_count = 0;

  bool operator==(const SketchDescriptor&) const = default;
};

struct Param {
  double value = 0.0;
  std::string unit;

  bool operator==(const Param&) const = default;
};

struct Feature {
  std::string id;
  FeatureType type = FeatureType::Other;
  std::string type_tag;  // set only when type == Other
  FeatureSubtype subtype = FeatureSubtype::None;
  std::string subtype_tag;  // set only when subtype == Other
  AttributedFaceGraph face_graph;
  std::optional<SketchDescriptor> sketch;
  std::map<std::string, Param> params;
  std::optional<bool> detail_hint;

  bool operator==(const Feature&) const = default;
};

/// An ordered feature history plus its dependency DAG. Dependency edges are
/// (parent, child) pairs where the child references the parent; a valid model
/// lists every parent before its children.
struct FeatureModel {
  std::string model_id;
  std::vector<Feature> features;
  std::vector<std::pair<std::string, std::string>> dependencies;  // sorted, unique

  bool operator==(const FeatureModel&) const = default;

  const Feature* find(const std::string& id) const;
  Feature* find(const std::string& id);
  bool has_feature(const std::string& id) const { return find(id) != nullptr; }
  bool has_edge(const std::string& parent, const std::string& child) const;

  /// Insert an edge keeping the edge list sorted and duplicate-free.
  void add_dependency(const std::string& parent, const std::string& child);

  std::vector<std::string> parents_of(const std::string& id) const;
  std::vector<std::string> children_of(const std::string& id) const;
};

struct Violation {
  std::string feature_id;
  std::string rule;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Check every model/feature invariant. Violations are data, not failures:
/// this never throws on structurally-parseable input.
std::vector<Violation> validate(const FeatureModel& model);

/// True iff a bijection between the feature sets exists that preserves
/// feature type, subtype, face-graph isomorphism class, sketch descriptor and
/// all dependency edges. Ids and parameter values are not compared.
bool canonical_equal(const FeatureModel& a, const FeatureModel& b);

/// Exact labeled-graph isomorphism on face graphs (full cover, backtracking).
bool face_graphs_isomorphic(const AttributedFaceGraph& a, const AttributedFaceGraph& b);

}  // namespace snowball
