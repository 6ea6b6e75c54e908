#include <doctest.h>

#include <algorithm>

#include "snowball/errors.hpp"
#include "snowball/family_gen.hpp"
#include "snowball/matching.hpp"
#include "test_support.hpp"

using namespace snowball;
using namespace snowball::test;

namespace {

// Two models whose feature codes form the chains [a,b,c,d] and [a,b,c,e]:
// four distinct feature types, the last one differing between the models.
std::pair<FeatureModel, FeatureModel> code_chains() {
  auto make = [](const std::string& id, FeatureType last) {
    FeatureModel m;
    m.model_id = id;
    m.features.push_back(plain_feature("n0", FeatureType::Datum, FeatureSubtype::None));
    m.features.push_back(plain_feature("n1", FeatureType::Protrusion));
    m.features.push_back(plain_feature("n2", FeatureType::Cut));
    m.features.push_back(plain_feature("n3", last));
    m.add_dependency("n0", "n1");
    m.add_dependency("n1", "n2");
    m.add_dependency("n2", "n3");
    return m;
  };
  return {make("A", FeatureType::Hole), make("B", FeatureType::Pattern)};
}

std::pair<AttributedDependencyGraph, AttributedDependencyGraph> graphs_of(
    const FeatureModel& a, const FeatureModel& b) {
  HierarchicalResult hier = hierarchical_match(a, b);
  return {build_graph(a, hier.codes.a), build_graph(b, hier.codes.b)};
}

}  // namespace

TEST_CASE("build_graph translates structure exactly") {
  FeatureModel m = chain_model();
  HierarchicalResult hier = hierarchical_match(m, m);
  AttributedDependencyGraph g = build_graph(m, hier.codes.a);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.adj[0][1] == 1);
  CHECK(g.adj[1][2] == 1);
  CHECK(g.adj[2][0] == 0);

  FeatureModel empty;
  CHECK(build_graph(empty, {}).node_count() == 0);

  std::map<std::string, int> missing{{"f0", 0}, {"f1", 1}};
  CHECK_THROWS_WITH_AS(build_graph(m, missing), doctest::Contains("f2"), DataError);
}

TEST_CASE("simplify removes a chamfer leaf and keeps everything else") {
  FeatureModel m = chain_model();
  m.features.push_back(plain_feature("ch", FeatureType::Chamfer));
  m.add_dependency("f2", "ch");
  auto [simplified, removed] = simplify(m);
  CHECK(removed == std::vector<std::string>{"ch"});
  CHECK(simplified.features.size() == 3);
  CHECK(validate(simplified).empty());
}

TEST_CASE("simplify keeps a hole that a non-detail pattern depends on") {
  FeatureModel m = chain_model();
  m.features.push_back(plain_feature("h", FeatureType::Hole));
  m.features.push_back(plain_feature("pat", FeatureType::Pattern));
  m.add_dependency("f2", "h");
  m.add_dependency("h", "pat");
  auto [simplified, removed] = simplify(m);
  CHECK(removed.empty());
  CHECK(simplified.features.size() == 5);
}

TEST_CASE("simplify removes detail chains transitively") {
  FeatureModel m = chain_model();
  m.features.push_back(plain_feature("h", FeatureType::Hole));
  m.features.push_back(plain_feature("r", FeatureType::Round));
  m.add_dependency("f2", "h");
  m.add_dependency("h", "r");
  auto [simplified, removed] = simplify(m);
  CHECK(removed == std::vector<std::string>{"h", "r"});
  CHECK(simplified.features.size() == 3);
}

TEST_CASE("simplify is the identity on detail-free models") {
  FeatureModel m = chain_model();
  auto [simplified, removed] = simplify(m);
  CHECK(removed.empty());
  CHECK(simplified == m);
}

TEST_CASE("detail_hint overrides the heuristic") {
  Feature f = plain_feature("x", FeatureType::Hole);
  CHECK(is_detail_feature(f));
  f.detail_hint = false;
  CHECK_FALSE(is_detail_feature(f));
  Feature g = plain_feature("y", FeatureType::Cut);
  CHECK_FALSE(is_detail_feature(g));
  g.detail_hint = true;
  CHECK(is_detail_feature(g));
}

TEST_CASE("mcs on identical graphs maps every node") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FeatureModel m = gen_random_model(seed, 9, "m");
    auto [ga, gb] = graphs_of(m, m);
    MatchResult r = mcs(ga, gb);
    CHECK(r.pairs.size() == m.features.size());
    CHECK(r.matched_edge_count == static_cast<int>(ga.edge_count()));
    CHECK(r.exact);
    bool ok;
    std::string why;
    require_valid_match(ga, gb, r, &ok, &why);
    CHECK_MESSAGE(ok, why);
  }
}

TEST_CASE("code chains [a,b,c,d] vs [a,b,c,e] match exactly three features") {
  auto [a, b] = code_chains();
  auto [ga, gb] = graphs_of(a, b);
  MatchResult r = mcs(ga, gb);
  MatchResult oracle = mcs_exact_oracle(ga, gb);
  CHECK(r.pairs.size() == 3);
  CHECK(oracle.pairs.size() == 3);
  CHECK(r.pairs == oracle.pairs);
  CHECK(r.matched_edge_count == oracle.matched_edge_count);
}

TEST_CASE("mcs equals the exhaustive oracle on 100 random pairs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    FeatureModel a = gen_random_model(seed * 2 + 1, 3 + static_cast<int>(seed % 6), "a");
    FeatureModel b = gen_random_model(seed * 2 + 2, 3 + static_cast<int>((seed / 2) % 6), "b");
    auto [ga, gb] = graphs_of(a, b);
    MatchResult fast = mcs(ga, gb);
    MatchResult oracle = mcs_exact_oracle(ga, gb);
    REQUIRE_MESSAGE(fast.pairs.size() == oracle.pairs.size(), "seed ", seed);
    CHECK(fast.matched_edge_count == oracle.matched_edge_count);
    CHECK(fast.pairs == oracle.pairs);  // identical tie-breaks

    bool ok;
    std::string why;
    require_valid_match(ga, gb, fast, &ok, &why);
    CHECK_MESSAGE(ok, why);
    require_valid_match(ga, gb, oracle, &ok, &why);
    CHECK_MESSAGE(ok, why);
  }
}

TEST_CASE("the oracle refuses graphs over its size bound") {
  FeatureModel big = gen_random_model(5, 12, "big");
  auto [ga, gb] = graphs_of(big, big);
  CHECK_THROWS_AS(mcs_exact_oracle(ga, gb), DataError);
  CHECK_NOTHROW(mcs_exact_oracle(ga, gb, 12));
}

TEST_CASE("adding a feature never decreases the unbounded cardinality") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    FeatureModel a = gen_random_model(seed + 500, 7, "a");
    FeatureModel b = gen_random_model(seed + 900, 7, "b");
    auto [ga, gb] = graphs_of(a, b);
    const std::size_t before = mcs(ga, gb).pairs.size();

    FeatureModel a2 = a;
    Feature extra = plain_feature("extra", FeatureType::Pattern, FeatureSubtype::Loft);
    a2.features.push_back(extra);
    if (!a.features.empty()) a2.add_dependency(a.features[0].id, "extra");
    auto [ga2, gb2] = graphs_of(a2, b);
    CHECK(mcs(ga2, gb2).pairs.size() >= before);
  }
}

TEST_CASE("mcs cardinality is symmetric") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FeatureModel a = gen_random_model(seed + 50, 8, "a");
    FeatureModel b = gen_random_model(seed + 70, 8, "b");
    auto [ga, gb] = graphs_of(a, b);
    auto [gb2, ga2] = graphs_of(b, a);
    CHECK(mcs(ga, gb).pairs.size() == mcs(gb2, ga2).pairs.size());
  }
}

TEST_CASE("depth limits 5..9 preserve cardinality on generator families") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratedFamily fam = gen_family(GenConfig{2, 25, 4, 8, 0.3, 0.1, seed + 7000});
    const FeatureModel& a = fam.members[0];
    const FeatureModel& b = fam.members[1];
    auto [ga, gb] = graphs_of(a, b);
    const std::size_t unbounded = mcs(ga, gb).pairs.size();
    for (int depth : {5, 7, 9}) {
      SearchConfig cfg;
      cfg.depth_limit = depth;
      CHECK_MESSAGE(mcs(ga, gb, cfg).pairs.size() == unbounded, "seed ", seed, " depth ",
                    depth);
    }
  }
}

TEST_CASE("a node budget cuts the search but reports best-so-far") {
  GeneratedFamily fam = gen_family(GenConfig{2, 20, 3, 5, 0.3, 0.1, 99});
  auto [ga, gb] = graphs_of(fam.members[0], fam.members[1]);
  SearchConfig cfg;
  cfg.node_budget = 5;
  MatchResult r = mcs(ga, gb, cfg);
  CHECK_FALSE(r.exact);
  CHECK(r.iterations <= 6);
  CHECK(r.pairs.size() <= mcs(ga, gb).pairs.size());
}

TEST_CASE("max_common_features matches a model fully against itself") {
  FeatureModel m = gen_random_model(123, 10, "m");
  MatchResult r = max_common_features(m, m);
  CHECK(r.pairs.size() == m.features.size());
  for (const auto& [x, y] : r.pairs) CHECK(x == y);
}

TEST_CASE("planted-core pairs with disjoint details match exactly the core") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratedFamily fam = gen_family(GenConfig{2, 10, 2, 4, 0.0, 0.15, seed + 300});
    MatchResult r = max_common_features(fam.members[0], fam.members[1]);
    CHECK(r.pairs.size() == 10);  // overlap 0: details never match
    for (const auto& [x, y] : r.pairs) CHECK(x == y);
  }
}

TEST_CASE("simplify inside the pipeline drops detail features from the match") {
  GeneratedFamily fam = gen_family(GenConfig{2, 8, 2, 2, 1.0, 0.1, 17});
  SearchConfig with;
  with.use_simplify = true;
  MatchResult simplified = max_common_features(fam.members[0], fam.members[1], with);
  MatchResult full = max_common_features(fam.members[0], fam.members[1]);
  CHECK(simplified.pairs.size() == 8);     // details removed before matching
  CHECK(full.pairs.size() > 8);            // overlap 1.0 clones every detail
}
