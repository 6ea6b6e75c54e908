#include <doctest.h>

#include "snowball/errors.hpp"
#include "snowball/family_gen.hpp"
#include "snowball/master.hpp"
#include "snowball/matching.hpp"
#include "test_support.hpp"

using namespace snowball;
using namespace snowball::test;

TEST_CASE("a degenerate config yields parameter-jittered core clones") {
  GeneratedFamily fam = gen_family(GenConfig{3, 7, 0, 0, 0.0, 0.2, 9});
  CHECK(fam.truth.distinct_detail_count == 0);
  CHECK(fam.truth.details.empty());
  for (const auto& member : fam.members) {
    CHECK(member.features.size() == 7);
    CHECK(canonical_equal(member, fam.truth.core_model));
  }
}

TEST_CASE("generation is deterministic in the seed") {
  GenConfig cfg{4, 9, 2, 4, 0.3, 0.1, 12345};
  GeneratedFamily f1 = gen_family(cfg);
  GeneratedFamily f2 = gen_family(cfg);
  REQUIRE(f1.members.size() == f2.members.size());
  for (std::size_t i = 0; i < f1.members.size(); ++i) CHECK(f1.members[i] == f2.members[i]);
  CHECK(f1.truth.distinct_detail_count == f2.truth.distinct_detail_count);

  GenConfig other = cfg;
  other.rng_seed = 54321;
  CHECK(gen_family(other).members[0] != f1.members[0]);
}

TEST_CASE("every member passes validate and embeds the planted core") {
  GeneratedFamily fam = gen_family(GenConfig{5, 10, 2, 4, 0.3, 0.1, 777});
  for (const auto& member : fam.members) {
    CHECK(validate(member).empty());
    MatchResult r = max_common_features(fam.truth.core_model, member);
    CHECK(r.pairs.size() == fam.truth.core_ids.size());
  }
}

TEST_CASE("the classic config recovers the planted core through roll") {
  // 5 models, core 10, details 2..4, overlap 0.3.
  GeneratedFamily fam = gen_family(GenConfig{5, 10, 2, 4, 0.3, 0.1, 424242});
  auto [master, report] = roll(fam.members);
  CHECK(master.model.features.size() ==
        fam.truth.core_ids.size() + static_cast<std::size_t>(fam.truth.distinct_detail_count));
  FeatureModel core = extract_core(master);
  CHECK(canonical_equal(core, fam.truth.core_model));
  CHECK(report.core_ids.size() == fam.truth.core_ids.size());
}

TEST_CASE("clone groups share descriptors and anchors") {
  GeneratedFamily fam = gen_family(GenConfig{4, 6, 2, 3, 0.9, 0.3, 31});
  std::map<int, std::vector<const Feature*>> by_group;
  std::map<int, std::set<std::string>> anchors;
  for (const auto& d : fam.details_by_group()) (void)d;  // not part of the API
}

TEST_CASE("infeasible configs are rejected") {
  CHECK_THROWS_AS(gen_family(GenConfig{1, 5, 1, 2, 0.3, 0.1, 1}), DataError);
  CHECK_THROWS_AS(gen_family(GenConfig{3, 0, 1, 2, 0.3, 0.1, 1}), DataError);
  CHECK_THROWS_AS(gen_family(GenConfig{3, 5, 3, 2, 0.3, 0.1, 1}), DataError);
  CHECK_THROWS_AS(gen_family(GenConfig{3, 5, 1, 2, 1.5, 0.1, 1}), DataError);
}

TEST_CASE("truth round-trips through JSON") {
  GeneratedFamily fam = gen_family(GenConfig{3, 6, 1, 3, 0.5, 0.1, 99});
  FamilyTruth back = truth_from_json(truth_to_json(fam.truth));
  CHECK(back.core_ids == fam.truth.core_ids);
  CHECK(back.core_model == fam.truth.core_model);
  CHECK(back.distinct_detail_count == fam.truth.distinct_detail_count);
  CHECK(back.details.size() == fam.truth.details.size());
}

TEST_CASE("random models are valid across sizes") {
  for (int n : {0, 1, 5, 12}) {
    FeatureModel m = gen_random_model(7, n);
    CHECK(static_cast<int>(m.features.size()) == n);
    CHECK(validate(m).empty());
  }
}
