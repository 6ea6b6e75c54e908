#include "snowball/family_gen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "snowball/errors.hpp"
#include "snowball/model_io.hpp"
#include "snowball/rng.hpp"

namespace snowball {

using nlohmann::json;

namespace {

AttributedFaceGraph random_face_graph(Rng& rng, int min_faces, int max_faces) {
  AttributedFaceGraph g;
  const int n = rng.range(min_faces, max_faces);
  static const SurfaceClass kSurfaces[] = {SurfaceClass::Plane,  SurfaceClass::Cylinder,
                                           SurfaceClass::Cone,   SurfaceClass::Sphere,
                                           SurfaceClass::Torus,  SurfaceClass::Freeform};
  static const Convexity kConvexities[] = {Convexity::Convex, Convexity::Concave,
                                           Convexity::Smooth};
  for (int i = 0; i < n; ++i) {
    Face face;
    face.id = "F" + std::to_string(i);
    face.surface = kSurfaces[rng.index(6)];
    face.genus = rng.chance(0.15) ? 1 : 0;
    g.faces.push_back(std::move(face));
  }
  std::set<std::pair<int, int>> used;
  auto add_adj = [&](int a, int b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) return;
    g.adjacencies.push_back({"F" + std::to_string(a), "F" + std::to_string(b),
                             kConvexities[rng.index(3)]});
  };
  for (int i = 1; i < n; ++i) add_adj(rng.range(0, i - 1), i);  // connected spine
  const int extras = rng.range(0, std::max(0, n - 2));
  for (int e = 0; e < extras; ++e) add_adj(rng.range(0, n - 1), rng.range(0, n - 1));
  return g;
}

SketchDescriptor random_sketch(Rng& rng) {
  SketchDescriptor s;
  switch (rng.range(0, 3)) {
    case 0: s.topology = SketchTopology::ClosedLoop; s.loop_count = 1; break;
    case 1: s.topology = SketchTopology::SingleNonClosedLoop; s.loop_count = 1; break;
    case 2: s.topology = SketchTopology::MultiClosedLoop; s.loop_count = rng.range(2, 4); break;
    default: s.topology = SketchTopology::MultiNonClosedLoop; s.loop_count = rng.range(2, 3); break;
  }
  s.linear_edge_count = rng.range(0, 8);
  s.curved_edge_count = rng.range(0, 4);
  if (s.linear_edge_count + s.curved_edge_count == 0) s.linear_edge_count = 1;
  return s;
}

double jittered(Rng& rng, double base, double jitter) {
  return base * (1.0 + jitter * rng.symmetric());
}

struct DetailGroup {
  int id = 0;
  Feature prototype;    // descriptor template; params jittered per member
  std::string anchor;   // core feature the detail attaches to
};

}  // namespace

GeneratedFamily gen_family(const GenConfig& cfg) {
  if (cfg.family_size < 2) throw DataError("infeasible config: family_size must be >= 2");
  if (cfg.core_size < 1) throw DataError("infeasible config: core_size must be >= 1");
  if (cfg.detail_min < 0 || cfg.detail_max < cfg.detail_min)
    throw DataError("infeasible config: detail range must satisfy 0 <= min <= max");
  if (cfg.detail_overlap_probability < 0.0 || cfg.detail_overlap_probability > 1.0)
    throw DataError("infeasible config: detail_overlap_probability must be in [0,1]");
  if (cfg.param_jitter < 0.0 || cfg.param_jitter > 1.0)
    throw DataError("infeasible config: param_jitter must be in [0,1]");

  Rng rng(cfg.rng_seed);
  GeneratedFamily out;

  // Planted core: identical construction history in every member, only the
  // parameter values vary. The first feature is the datum root.
  std::vector<Feature> core;
  std::vector<std::pair<std::string, std::string>> core_edges;
  static const FeatureType kMainTypes[] = {FeatureType::Protrusion, FeatureType::Protrusion,
                                           FeatureType::Cut, FeatureType::Pattern};
  static const FeatureSubtype kSubtypes[] = {FeatureSubtype::Extrude, FeatureSubtype::Revolve,
                                             FeatureSubtype::Loft, FeatureSubtype::Sweep};
  for (int i = 0; i < cfg.core_size; ++i) {
    Feature f;
    f.id = "c" + std::to_string(i);
    if (i == 0) {
      f.type = FeatureType::Datum;
      f.subtype = FeatureSubtype::None;
    } else {
      f.type = kMainTypes[rng.index(4)];
      f.subtype = kSubtypes[rng.index(4)];
      f.face_graph = random_face_graph(rng, 3, 6);
      if (rng.chance(0.8)) f.sketch = random_sketch(rng);
      f.params["depth"] = {double(rng.range(5, 80)), "mm"};
      if (rng.chance(0.5)) f.params["radius"] = {double(rng.range(2, 40)), "mm"};
      const int nparents = (i >= 2 && rng.chance(0.35)) ? 2 : 1;
      std::set<int> parents;
      while (static_cast<int>(parents.size()) < nparents)
        parents.insert(rng.range(std::max(0, i - 4), i - 1));
      for (int p : parents) core_edges.emplace_back("c" + std::to_string(p), f.id);
    }
    core.push_back(std::move(f));
  }

  out.truth.core_model.model_id = "core";
  out.truth.core_model.features = core;
  for (const auto& [p, c] : core_edges) out.truth.core_model.add_dependency(p, c);
  for (const auto& f : core) out.truth.core_ids.push_back(f.id);

  // Detail groups get pairwise-distinct face-graph certificates (a genus tag
  // no core feature uses), so clones are genuinely matchable and non-clones
  // genuinely distinguishable — the planted ground truth is unambiguous.
  static const FeatureType kDetailTypes[] = {FeatureType::Hole, FeatureType::Round,
                                             FeatureType::Chamfer, FeatureType::Cut};
  std::vector<DetailGroup> groups;
  auto new_group = [&](Rng& r) -> int {
    DetailGroup g;
    g.id = static_cast<int>(groups.size());
    Feature f;
    f.id = "d" + std::to_string(g.id);
    f.type = kDetailTypes[r.index(4)];
    f.subtype = r.chance(0.5) ? FeatureSubtype::Extrude : FeatureSubtype::Revolve;
    f.face_graph = random_face_graph(r, 2, 3);
    f.face_graph.faces[0].genus = 100 + g.id;
    if (r.chance(0.7)) f.sketch = random_sketch(r);
    f.params["size"] = {double(r.range(1, 15)), "mm"};
    f.detail_hint = true;
    g.prototype = std::move(f);
    g.anchor = "c" + std::to_string(r.range(0, cfg.core_size - 1));
    groups.push_back(std::move(g));
    return groups.back().id;
  };

  for (int mi = 0; mi < cfg.family_size; ++mi) {
    FeatureModel member;
    member.model_id = "m" + std::to_string(mi);

    for (const auto& proto : core) {
      Feature f = proto;
      for (auto& [name, param] : f.params)
        param.value = jittered(rng, param.value, cfg.param_jitter);
      member.features.push_back(std::move(f));
    }
    for (const auto& [p, c] : core_edges) member.add_dependency(p, c);

    std::set<int> present;
    const int ndetails = rng.range(cfg.detail_min, cfg.detail_max);
    for (int di = 0; di < ndetails; ++di) {
      std::vector<int> cloneable;
      for (const auto& g : groups)
        if (!present.count(g.id)) cloneable.push_back(g.id);

      int group_id;
      if (!cloneable.empty() && rng.chance(cfg.detail_overlap_probability))
        group_id = cloneable[rng.index(cloneable.size())];
      else
        group_id = new_group(rng);
      present.insert(group_id);
      const DetailGroup& group = groups[static_cast<std::size_t>(group_id)];

      Feature f = group.prototype;
      for (auto& [name, param] : f.params)
        param.value = jittered(rng, param.value, cfg.param_jitter);
      member.features.push_back(f);
      member.add_dependency(group.anchor, f.id);
      out.truth.details.push_back({member.model_id, f.id, group.id});
    }

    auto violations = validate(member);
    if (!violations.empty())
      throw std::logic_error("generator produced an invalid member: " +
                             violations.front().rule);
    out.members.push_back(std::move(member));
  }
  out.truth.distinct_detail_count = static_cast<int>(groups.size());
  return out;
}

FeatureModel gen_random_model(std::uint64_t seed, int feature_count,
                              const std::string& model_id) {
  Rng rng(seed);
  FeatureModel m;
  m.model_id = model_id;
  static const FeatureType kTypes[] = {FeatureType::Datum,  FeatureType::Protrusion,
                                       FeatureType::Cut,    FeatureType::Round,
                                       FeatureType::Chamfer, FeatureType::Hole,
                                       FeatureType::Pattern, FeatureType::Other};
  static const FeatureSubtype kSubtypes[] = {FeatureSubtype::Extrude, FeatureSubtype::Revolve,
                                             FeatureSubtype::Loft, FeatureSubtype::Sweep,
                                             FeatureSubtype::None};
  for (int i = 0; i < feature_count; ++i) {
    Feature f;
    f.id = "f" + std::to_string(i);
    f.type = kTypes[rng.index(8)];
    if (f.type == FeatureType::Other) f.type_tag = "t" + std::to_string(rng.range(0, 2));
    f.subtype = kSubtypes[rng.index(5)];
    if (f.type != FeatureType::Datum && rng.chance(0.85))
      f.face_graph = random_face_graph(rng, 1, 4);
    if (rng.chance(0.7)) f.sketch = random_sketch(rng);
    if (rng.chance(0.6)) f.params["p0"] = {rng.unit() * 50.0, "mm"};
    m.features.push_back(std::move(f));
    for (int j = 0; j < i; ++j)
      if (rng.chance(std::min(0.9, 1.6 / i)))
        m.add_dependency("f" + std::to_string(j), "f" + std::to_string(i));
  }
  return m;
}

std::string truth_to_json(const FamilyTruth& truth) {
  json j;
  j["core"] = truth.core_ids;
  j["core_model"] = model_to_json(truth.core_model);
  j["distinct_detail_count"] = truth.distinct_detail_count;
  json details = json::object();
  for (const auto& d : truth.details)
    details[d.model_id].push_back(json{{"id", d.feature_id}, {"group", d.group}});
  j["details"] = std::move(details);
  return j.dump(2) + "\n";
}

FamilyTruth truth_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("parse error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  FamilyTruth truth;
  for (const auto& id : j.at("core")) truth.core_ids.push_back(id.get<std::string>());
  truth.core_model = model_from_json(j.at("core_model"), "$.core_model");
  truth.distinct_detail_count = j.at("distinct_detail_count").get<int>();
  for (auto it = j.at("details").begin(); it != j.at("details").end(); ++it)
    for (const auto& d : it.value())
      truth.details.push_back(
          {it.key(), d.at("id").get<std::string>(), d.at("group").get<int>()});
  return truth;
}

}  // namespace snowball
