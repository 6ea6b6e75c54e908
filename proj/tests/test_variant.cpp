#include <doctest.h>

#include "snowball/errors.hpp"
#include "snowball/family_gen.hpp"
#include "snowball/master.hpp"
#include "snowball/matching.hpp"
#include "snowball/variant.hpp"
#include "test_support.hpp"

using namespace snowball;
using namespace snowball::test;

TEST_CASE("suppressing a leaf removes exactly that feature") {
  FeatureModel m = chain_model();
  std::vector<std::string> removed;
  FeatureModel out = suppress(m, {"f2"}, &removed);
  CHECK(removed == std::vector<std::string>{"f2"});
  CHECK(out.features.size() == 2);
  CHECK(validate(out).empty());
}

TEST_CASE("suppression removes the full dependent closure") {
  FeatureModel m = chain_model();  // f0 -> f1 -> f2
  std::vector<std::string> removed;
  FeatureModel out = suppress(m, {"f0"}, &removed);
  CHECK(removed == std::vector<std::string>{"f0", "f1", "f2"});
  CHECK(out.features.empty());
}

TEST_CASE("suppress rejects unknown ids") {
  CHECK_THROWS_AS(suppress(chain_model(), {"ghost"}), DataError);
}

TEST_CASE("suppressing a core feature warns instead of failing") {
  FeatureModel m = chain_model();
  VariantScript script;
  script.suppress = {"f1"};
  std::set<std::string> core{"f0", "f1"};
  VariantReport report;
  FeatureModel out = apply_script(m, script, &core, &report);
  CHECK(out.features.size() == 1);  // f1 and its dependent f2 removed
  CHECK(report.removed == std::vector<std::string>{"f1", "f2"});
  CHECK(report.core_breaks == std::vector<std::string>{"f1"});
}

TEST_CASE("add_features grafts a one-feature fragment onto an anchor") {
  FeatureModel m = chain_model();
  FeatureModel fragment;
  fragment.model_id = "frag";
  fragment.features.push_back(plain_feature("n", FeatureType::Hole));
  fragment.add_dependency("anchor", "n");

  FeatureModel out = add_features(m, fragment, {{"anchor", "f1"}});
  CHECK(out.features.size() == 4);
  CHECK(out.has_feature("frag.n"));
  CHECK(out.has_edge("f1", "frag.n"));
  CHECK(validate(out).empty());
}

TEST_CASE("add_features preserves internal fragment dependencies") {
  FeatureModel m = chain_model();
  FeatureModel fragment;
  fragment.model_id = "frag";
  fragment.features.push_back(plain_feature("x", FeatureType::Cut));
  fragment.features.push_back(plain_feature("y", FeatureType::Round, FeatureSubtype::None));
  fragment.add_dependency("x", "y");
  fragment.add_dependency("base", "x");

  FeatureModel out = add_features(m, fragment, {{"base", "f2"}});
  CHECK(out.features.size() == 5);
  CHECK(out.has_edge("frag.x", "frag.y"));
  CHECK(out.has_edge("f2", "frag.x"));
  CHECK(validate(out).empty());
}

TEST_CASE("an unresolved placeholder is an error") {
  FeatureModel fragment;
  fragment.model_id = "frag";
  fragment.features.push_back(plain_feature("n", FeatureType::Hole));
  fragment.add_dependency("nowhere", "n");
  CHECK_THROWS_WITH_AS(add_features(chain_model(), fragment, {}),
                       doctest::Contains("unresolved placeholder"), DataError);
  CHECK_THROWS_WITH_AS(add_features(chain_model(), fragment, {{"nowhere", "ghost"}}),
                       doctest::Contains("ghost"), DataError);
}

TEST_CASE("set_params changes exactly the named value") {
  FeatureModel m = chain_model();
  m.features[1].params["depth"] = {10.0, "mm"};
  FeatureModel out = set_params(m, {{"f1", "depth", 12.5}});
  CHECK(out.features[1].params.at("depth").value == 12.5);
  CHECK(out.features[1].params.at("depth").unit == "mm");

  FeatureModel reference = out;
  reference.features[1].params.at("depth").value = 10.0;
  CHECK(reference == m);  // everything else identical
}

TEST_CASE("parameter edits are invisible to matching") {
  FeatureModel m = chain_model();
  m.features[1].params["depth"] = {10.0, "mm"};
  FeatureModel edited = set_params(m, {{"f1", "depth", 77.0}});
  MatchResult r = max_common_features(m, edited);
  CHECK(r.pairs.size() == m.features.size());
  CHECK(canonical_equal(m, edited));
}

TEST_CASE("set_params rejects unknown features and parameters") {
  FeatureModel m = chain_model();
  CHECK_THROWS_AS(set_params(m, {{"ghost", "depth", 1.0}}), DataError);
  // A datum with no parameters: unknown-parameter error.
  CHECK_THROWS_WITH_AS(set_params(m, {{"f0", "depth", 1.0}}),
                       doctest::Contains("unknown parameter"), DataError);
}

TEST_CASE("suppress and add with disjoint targets commute") {
  FeatureModel m = chain_model();
  m.features.push_back(plain_feature("leaf", FeatureType::Hole));
  m.add_dependency("f1", "leaf");

  FeatureModel fragment;
  fragment.model_id = "frag";
  fragment.features.push_back(plain_feature("n", FeatureType::Chamfer, FeatureSubtype::None));
  fragment.add_dependency("p", "n");
  const std::map<std::string, std::string> att{{"p", "f0"}};

  FeatureModel sa = add_features(suppress(m, {"leaf"}), fragment, att);
  FeatureModel as = suppress(add_features(m, fragment, att), {"leaf"});
  CHECK(canonical_equal(sa, as));
}

TEST_CASE("a variant touching only non-core features keeps the core") {
  GeneratedFamily fam = gen_family(GenConfig{3, 8, 2, 3, 0.4, 0.1, 2024});
  auto [master, report] = roll(fam.members);
  FeatureModel original_core = extract_core(master);

  // Suppress one non-core detail feature and graft a new fragment.
  const std::set<std::string> core = master.core_ids();
  std::string victim;
  for (const auto& f : master.model.features)
    if (!core.count(f.id) && master.model.children_of(f.id).empty()) {
      victim = f.id;
      break;
    }
  REQUIRE(!victim.empty());

  VariantScript script;
  script.suppress = {victim};
  VariantScript::Addition addition;
  addition.fragment.model_id = "newdetail";
  Feature nf = plain_feature("n", FeatureType::Hole);
  nf.face_graph.faces[0].genus = 77;  // unlike any planted detail
  nf.detail_hint = true;
  addition.fragment.features.push_back(nf);
  addition.fragment.add_dependency("root", "n");
  addition.attachments = {{"root", fam.truth.core_ids[0]}};
  script.add = {addition};

  FeatureModel variant = apply_script(master.model, script, &core);
  variant.model_id = "variant";
  CHECK(validate(variant).empty());

  std::vector<FeatureModel> extended = fam.members;
  extended.push_back(variant);
  auto [master2, report2] = roll(extended);
  (void)report2;
  FeatureModel new_core = extract_core(master2);
  CHECK(canonical_equal(new_core, original_core));
  CHECK(canonical_equal(new_core, fam.truth.core_model));
  (void)report;
}

TEST_CASE("scripts parse from JSON") {
  const std::string text = R"({
    "suppress": ["d1", "d2"],
    "add": [{
      "fragment": {
        "model_id": "frag",
        "features": [{"id": "n", "type": "hole", "subtype": "extrude",
                      "faces": [{"id": "F0", "surface": "cylinder", "genus": 0}],
                      "adjacencies": []}],
        "dependencies": [["anchor", "n"]]
      },
      "attachments": {"anchor": "c0"}
    }],
    "set_params": [{"feature": "c1", "name": "depth", "value": 3.25}]
  })";
  VariantScript script = load_script(text);
  CHECK(script.suppress == std::vector<std::string>{"d1", "d2"});
  REQUIRE(script.add.size() == 1);
  CHECK(script.add[0].fragment.features.size() == 1);
  CHECK(script.add[0].attachments.at("anchor") == "c0");
  REQUIRE(script.set_params.size() == 1);
  CHECK(script.set_params[0].value == 3.25);

  CHECK_THROWS_AS(load_script("{"), ParseError);
  CHECK_THROWS_AS(load_script(R"({"suppress": [1]})"), SchemaError);
}
