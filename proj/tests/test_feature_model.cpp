#include <doctest.h>

#include <algorithm>

#include "snowball/errors.hpp"
#include "snowball/family_gen.hpp"
#include "snowball/feature_model.hpp"
#include "test_support.hpp"

using namespace snowball;
using namespace snowball::test;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& rule) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == rule; });
}

}  // namespace

TEST_CASE("validate accepts a well-formed chain") {
  CHECK(validate(chain_model()).empty());
}

TEST_CASE("validate flags a dependency whose parent comes later in history") {
  FeatureModel m = chain_model();
  m.add_dependency("f2", "f0");  // f2 is after f0
  auto vs = validate(m);
  CHECK(has_violation(vs, "dependency precedes parent"));
}

TEST_CASE("validate flags a datum with faces") {
  FeatureModel m = chain_model();
  m.features[0].face_graph.faces = {{"F0", SurfaceClass::Plane, 0}};
  auto vs = validate(m);
  CHECK(has_violation(vs, "datum has faces"));
}

TEST_CASE("validate catches edge and sketch defects") {
  FeatureModel m = chain_model();
  m.add_dependency("f1", "nowhere");
  m.features[1].sketch = SketchDescriptor{SketchTopology::MultiClosedLoop, 1, 4, 0};
  m.features[2].sketch = SketchDescriptor{SketchTopology::ClosedLoop, 1, 0, 0};
  auto vs = validate(m);
  CHECK(has_violation(vs, "unknown edge endpoint"));
  CHECK(has_violation(vs, "loop count mismatch"));
  CHECK(has_violation(vs, "empty sketch"));
}

TEST_CASE("validate flags face graph defects") {
  FeatureModel m = chain_model();
  auto& g = m.features[1].face_graph;
  g.adjacencies.push_back({"F0", "F0", Convexity::Convex});
  g.adjacencies.push_back({"F1", "F0", Convexity::Smooth});  // duplicate of F0-F1
  g.adjacencies.push_back({"F0", "FX", Convexity::Convex});
  auto vs = validate(m);
  CHECK(has_violation(vs, "self adjacency"));
  CHECK(has_violation(vs, "duplicate adjacency"));
  CHECK(has_violation(vs, "adjacency references missing face"));
}

TEST_CASE("validate is total on arbitrary structurally-parseable input") {
  FeatureModel m;
  m.model_id = "junk";
  Feature f = plain_feature("x");
  f.sketch = SketchDescriptor{SketchTopology::MultiNonClosedLoop, -3, -1, -1};
  f.face_graph.faces.push_back({"F9", SurfaceClass::Freeform, -7});
  m.features.push_back(f);
  m.features.push_back(f);  // duplicate id
  m.dependencies = {{"ghost", "x"}, {"x", "ghost"}, {"x", "x"}};
  auto vs = validate(m);
  CHECK(!vs.empty());
  CHECK(has_violation(vs, "duplicate feature id"));
  CHECK(has_violation(vs, "negative genus"));

  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    FeatureModel rnd = gen_random_model(seed, 7);
    CHECK_NOTHROW(validate(rnd));
  }
}

TEST_CASE("history order is a topological order of the dependency DAG") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    FeatureModel m = gen_random_model(seed, 10);
    REQUIRE(validate(m).empty());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < m.features.size(); ++i) pos[m.features[i].id] = i;
    for (const auto& [p, c] : m.dependencies) CHECK(pos.at(p) < pos.at(c));
  }
}

TEST_CASE("canonical_equal: id renaming is invisible") {
  FeatureModel a = chain_model("a");
  FeatureModel b = chain_model("b");
  for (auto& f : b.features) f.id = "renamed_" + f.id;
  b.dependencies.clear();
  b.add_dependency("renamed_f0", "renamed_f1");
  b.add_dependency("renamed_f1", "renamed_f2");
  CHECK(canonical_equal(a, b));
}

TEST_CASE("canonical_equal: parameter values are invisible") {
  FeatureModel a = chain_model("a");
  FeatureModel b = a;
  b.features[1].params["depth"] = {99.5, "mm"};
  CHECK(canonical_equal(a, b));
}

TEST_CASE("canonical_equal: one extra dependency edge differs") {
  FeatureModel a = chain_model("a");
  FeatureModel b = a;
  b.add_dependency("f0", "f2");
  CHECK_FALSE(canonical_equal(a, b));
}

TEST_CASE("canonical_equal: different feature counts differ") {
  FeatureModel a = chain_model("a");
  FeatureModel b = a;
  b.features.push_back(plain_feature("extra", FeatureType::Hole));
  CHECK_FALSE(canonical_equal(a, b));
}

TEST_CASE("canonical_equal: attribute changes are visible") {
  FeatureModel a = chain_model("a");

  FeatureModel b = a;
  b.features[2].subtype = FeatureSubtype::Loft;
  CHECK_FALSE(canonical_equal(a, b));

  FeatureModel c = a;
  c.features[1].face_graph.adjacencies[0].convexity = Convexity::Concave;
  CHECK_FALSE(canonical_equal(a, c));

  FeatureModel d = a;
  d.features[1].sketch = SketchDescriptor{SketchTopology::ClosedLoop, 1, 4, 0};
  CHECK_FALSE(canonical_equal(a, d));
}

TEST_CASE("canonical_equal is an equivalence relation on random models") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    FeatureModel a = gen_random_model(seed, 8, "a");
    CHECK(canonical_equal(a, a));  // reflexive

    FeatureModel b = a;
    b.model_id = "b";
    for (auto& f : b.features) f.id = "b_" + f.id;
    std::vector<std::pair<std::string, std::string>> deps;
    for (const auto& [p, c] : a.dependencies) deps.emplace_back("b_" + p, "b_" + c);
    b.dependencies.clear();
    for (const auto& [p, c] : deps) b.add_dependency(p, c);

    FeatureModel c = b;
    c.model_id = "c";
    for (auto& f : c.features) f.params.clear();

    CHECK(canonical_equal(a, b));
    CHECK(canonical_equal(b, a));  // symmetric
    CHECK(canonical_equal(b, c));
    CHECK(canonical_equal(a, c));  // transitive
  }
}

TEST_CASE("face_graphs_isomorphic: exact, label-sensitive") {
  AttributedFaceGraph g;
  g.faces = {{"A", SurfaceClass::Plane, 0},
             {"B", SurfaceClass::Cylinder, 0},
             {"C", SurfaceClass::Plane, 1}};
  g.adjacencies = {{"A", "B", Convexity::Convex}, {"B", "C", Convexity::Concave}};

  AttributedFaceGraph renamed;
  renamed.faces = {{"x", SurfaceClass::Plane, 1},
                   {"y", SurfaceClass::Cylinder, 0},
                   {"z", SurfaceClass::Plane, 0}};
  renamed.adjacencies = {{"y", "x", Convexity::Concave}, {"z", "y", Convexity::Convex}};
  CHECK(face_graphs_isomorphic(g, renamed));

  AttributedFaceGraph different = renamed;
  different.adjacencies[0].convexity = Convexity::Smooth;
  CHECK_FALSE(face_graphs_isomorphic(g, different));
}

TEST_CASE("feature type tokens round-trip, including other(tag)") {
  std::string tag;
  CHECK(feature_type_from_token("cut") == FeatureType::Cut);
  CHECK(feature_type_from_token("other(rib)", &tag) == FeatureType::Other);
  CHECK(tag == "rib");
  CHECK(feature_type_token(FeatureType::Other, "rib") == "other(rib)");
  CHECK_THROWS_AS(feature_type_from_token("bogus"), SchemaError);
}
