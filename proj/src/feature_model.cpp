#include "snowball/feature_model.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "snowball/errors.hpp"

namespace snowball {

namespace {

const char* kOtherPrefix = "other(";

std::string tagged_other(const std::string& tag) { return std::string(kOtherPrefix) + tag + ")"; }

bool parse_other(const std::string& token, std::string* tag) {
  const std::size_t plen = 6;  // strlen("other(")
  if (token.size() < plen + 1 || token.compare(0, plen, kOtherPrefix) != 0 || token.back() != ')')
    return false;
  if (tag) *tag = token.substr(plen, token.size() - plen - 1);
  return true;
}

}  // namespace

std::string feature_type_token(FeatureType t, const std::string& tag) {
  switch (t) {
    case FeatureType::Datum: return "datum";
    case FeatureType::Protrusion: return "protrusion";
    case FeatureType::Cut: return "cut";
    case FeatureType::Round: return "round";
    case FeatureType::Chamfer: return "chamfer";
    case FeatureType::Hole: return "hole";
    case FeatureType::Pattern: return "pattern";
    case FeatureType::Other: return tagged_other(tag);
  }
  return "";
}

std::string feature_subtype_token(FeatureSubtype t, const std::string& tag) {
  switch (t) {
    case FeatureSubtype::Extrude: return "extrude";
    case FeatureSubtype::Revolve: return "revolve";
    case FeatureSubtype::Loft: return "loft";
    case FeatureSubtype::Sweep: return "sweep";
    case FeatureSubtype::None: return "none";
    case FeatureSubtype::Other: return tagged_other(tag);
  }
  return "";
}

std::string surface_class_token(SurfaceClass s) {
  switch (s) {
    case SurfaceClass::Plane: return "plane";
    case SurfaceClass::Cylinder: return "cylinder";
    case SurfaceClass::Cone: return "cone";
    case SurfaceClass::Sphere: return "sphere";
    case SurfaceClass::Torus: return "torus";
    case SurfaceClass::Freeform: return "freeform";
  }
  return "";
}

std::string convexity_token(Convexity c) {
  switch (c) {
    case Convexity::Convex: return "convex";
    case Convexity::Concave: return "concave";
    case Convexity::Smooth: return "smooth";
  }
  return "";
}

std::string sketch_topology_token(SketchTopology t) {
  switch (t) {
    case SketchTopology::ClosedLoop: return "closed_loop";
    case SketchTopology::SingleNonClosedLoop: return "single_non_closed_loop";
    case SketchTopology::MultiClosedLoop: return "multi_closed_loop";
    case SketchTopology::MultiNonClosedLoop: return "multi_non_closed_loop";
  }
  return "";
}

FeatureType feature_type_from_token(const std::string& token, std::string* tag) {
  if (tag) tag->clear();
  if (token == "datum") return FeatureType::Datum;
  if (token == "protrusion") return FeatureType::Protrusion;
  if (token == "cut") return FeatureType::Cut;
  if (token == "round") return FeatureType::Round;
  if (token == "chamfer") return FeatureType::Chamfer;
  if (token == "hole") return FeatureType::Hole;
  if (token == "pattern") return FeatureType::Pattern;
  if (parse_other(token, tag)) return FeatureType::Other;
  throw SchemaError("unknown feature type token: \"" + token + "\"");
}

FeatureSubtype feature_subtype_from_token(const std::string& token, std::string* tag) {
  if (tag) tag->clear();
  if (token == "extrude") return FeatureSubtype::Extrude;
  if (token == "revolve") return FeatureSubtype::Revolve;
  if (token == "loft") return FeatureSubtype::Loft;
  if (token == "sweep") return FeatureSubtype::Sweep;
  if (token == "none") return FeatureSubtype::None;
  if (parse_other(token, tag)) return FeatureSubtype::Other;
  throw SchemaError("unknown feature subtype token: \"" + token + "\"");
}

SurfaceClass surface_class_from_token(const std::string& token) {
  if (token == "plane") return SurfaceClass::Plane;
  if (token == "cylinder") return SurfaceClass::Cylinder;
  if (token == "cone") return SurfaceClass::Cone;
  if (token == "sphere") return SurfaceClass::Sphere;
  if (token == "torus") return SurfaceClass::Torus;
  if (token == "freeform") return SurfaceClass::Freeform;
  throw SchemaError("unknown surface_class token: \"" + token + "\"");
}

Convexity convexity_from_token(const std::string& token) {
  if (token == "convex") return Convexity::Convex;
  if (token == "concave") return Convexity::Concave;
  if (token == "smooth") return Convexity::Smooth;
  throw SchemaError("unknown convexity token: \"" + token + "\"");
}

SketchTopology sketch_topology_from_token(const std::string& token) {
  if (token == "closed_loop") return SketchTopology::ClosedLoop;
  if (token == "single_non_closed_loop") return SketchTopology::SingleNonClosedLoop;
  if (token == "multi_closed_loop") return SketchTopology::MultiClosedLoop;
  if (token == "multi_non_closed_loop") return SketchTopology::MultiNonClosedLoop;
  throw SchemaError("unknown sketch topology token: \"" + token + "\"");
}

const Feature* FeatureModel::find(const std::string& id) const {
  for (const auto& f : features)
    if (f.id == id) return &f;
  return nullptr;
}

Feature* FeatureModel::find(const std::string& id) {
  for (auto& f : features)
    if (f.id == id) return &f;
  return nullptr;
}

bool FeatureModel::has_edge(const std::string& parent, const std::string& child) const {
  return std::binary_search(dependencies.begin(), dependencies.end(),
                            std::make_pair(parent, child));
}

void FeatureModel::add_dependency(const std::string& parent, const std::string& child) {
  auto edge = std::make_pair(parent, child);
  auto it = std::lower_bound(dependencies.begin(), dependencies.end(), edge);
  if (it != dependencies.end() && *it == edge) return;
  dependencies.insert(it, std::move(edge));
}

std::vector<std::string> FeatureModel::parents_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [p, c] : dependencies)
    if (c == id) out.push_back(p);
  return out;
}

std::vector<std::string> FeatureModel::children_of(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [p, c] : dependencies)
    if (p == id) out.push_back(c);
  return out;
}

namespace {

void validate_face_graph(const Feature& f, std::vector<Violation>& out) {
  std::set<std::string> face_ids;
  for (const auto& face : f.face_graph.faces) {
    if (!face_ids.insert(face.id).second)
      out.push_back({f.id, "duplicate face id", face.id});
    if (face.genus < 0)
      out.push_back({f.id, "negative genus", face.id});
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& adj : f.face_graph.adjacencies) {
    if (adj.a == adj.b) {
      out.push_back({f.id, "self adjacency", adj.a});
      continue;
    }
    if (!face_ids.count(adj.a) || !face_ids.count(adj.b)) {
      out.push_back({f.id, "adjacency references missing face", adj.a + "-" + adj.b});
      continue;
    }
    auto key = std::minmax(adj.a, adj.b);
    if (!seen.insert(key).second)
      out.push_back({f.id, "duplicate adjacency", adj.a + "-" + adj.b});
  }
}

void validate_sketch(const Feature& f, std::vector<Violation>& out) {
  const auto& s = *f.sketch;
  const bool single = s.topology == SketchTopology::ClosedLoop ||
                      s.topology == SketchTopology::SingleNonClosedLoop;
  if (single && s.loop_count != 1)
    out.push_back({f.id, "loop count mismatch",
                   sketch_topology_token(s.topology) + " with loop_count " +
                       std::to_string(s.loop_count)});
  if (!single && s.loop_count < 2)
    out.push_back({f.id, "loop count mismatch",
                   sketch_topology_token(s.topology) + " with loop_count " +
                       std::to_string(s.loop_count)});
  if (s.linear_edge_count < 0 || s.curved_edge_count < 0)
    out.push_back({f.id, "negative edge count", ""});
  else if (s.linear_edge_count + s.curved_edge_count < 1)
    out.push_back({f.id, "empty sketch", ""});
}

}  // namespace

std::vector<Violation> validate(const FeatureModel& model) {
  std::vector<Violation> out;

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < model.features.size(); ++i) {
    const Feature& f = model.features[i];
    if (position.count(f.id))
      out.push_back({f.id, "duplicate feature id", ""});
    else
      position[f.id] = i;

    if (f.type == FeatureType::Datum && !f.face_graph.empty())
      out.push_back({f.id, "datum has faces", ""});
    validate_face_graph(f, out);
    if (f.sketch) validate_sketch(f, out);
  }

  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& [parent, child] : model.dependencies) {
    const std::string edge = parent + " -> " + child;
    auto pi = position.find(parent);
    auto ci = position.find(child);
    if (pi == position.end() || ci == position.end()) {
      out.push_back({child, "unknown edge endpoint", edge});
      continue;
    }
    if (!seen_edges.insert({parent, child}).second)
      out.push_back({child, "duplicate dependency", edge});
    if (pi->second >= ci->second)
      out.push_back({child, "dependency precedes parent", edge});
  }

  // Acyclicity, checked independently of the ordering rule.
  {
    std::map<std::string, std::vector<std::string>> children;
    std::map<std::string, int> indegree;
    for (const auto& f : model.features) indegree.emplace(f.id, 0);
    for (const auto& [parent, child] : model.dependencies) {
      if (!position.count(parent) || !position.count(child)) continue;
      children[parent].push_back(child);
      ++indegree[child];
    }
    std::queue<std::string> ready;
    for (const auto& [id, deg] : indegree)
      if (deg == 0) ready.push(id);
    std::size_t emitted = 0;
    while (!ready.empty()) {
      std::string id = ready.front();
      ready.pop();
      ++emitted;
      for (const auto& c : children[id])
        if (--indegree[c] == 0) ready.push(c);
    }
    if (emitted < indegree.size())
      out.push_back({"", "dependency cycle", ""});
  }

  return out;
}

bool face_graphs_isomorphic(const AttributedFaceGraph& a, const AttributedFaceGraph& b) {
  const std::size_t n = a.faces.size();
  if (n != b.faces.size() || a.adjacencies.size() != b.adjacencies.size()) return false;
  if (n == 0) return true;

  // Per-face invariant: surface class, genus, sorted incident convexities.
  auto face_keys = [](const AttributedFaceGraph& g) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < g.faces.size(); ++i) index[g.faces[i].id] = i;
    std::vector<std::vector<int>> incident(g.faces.size());
    for (const auto& adj : g.adjacencies) {
      auto ia = index.find(adj.a), ib = index.find(adj.b);
      if (ia == index.end() || ib == index.end()) continue;
      incident[ia->second].push_back(static_cast<int>(adj.convexity));
      incident[ib->second].push_back(static_cast<int>(adj.convexity));
    }
    std::vector<std::string> keys(g.faces.size());
    for (std::size_t i = 0; i < g.faces.size(); ++i) {
      std::sort(incident[i].begin(), incident[i].end());
      std::string k = surface_class_token(g.faces[i].surface) + ":" +
                      std::to_string(g.faces[i].genus) + ":";
      for (int c : incident[i]) k += std::to_string(c);
      keys[i] = std::move(k);
    }
    return keys;
  };

  const auto keys_a = face_keys(a);
  const auto keys_b = face_keys(b);
  {
    auto sa = keys_a, sb = keys_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }

  // Label lookup: (i, j) -> convexity or -1.
  auto edge_table = [](const AttributedFaceGraph& g) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < g.faces.size(); ++i) index[g.faces[i].id] = i;
    std::vector<std::vector<int>> t(g.faces.size(), std::vector<int>(g.faces.size(), -1));
    for (const auto& adj : g.adjacencies) {
      auto ia = index.find(adj.a), ib = index.find(adj.b);
      if (ia == index.end() || ib == index.end()) continue;
      t[ia->second][ib->second] = static_cast<int>(adj.convexity);
      t[ib->second][ia->second] = static_cast<int>(adj.convexity);
    }
    return t;
  };
  const auto ea = edge_table(a);
  const auto eb = edge_table(b);

  std::vector<int> assign(n, -1);
  std::vector<char> used(n, 0);

  auto dfs = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || keys_a[i] != keys_b[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i; ++k) {
        if (ea[i][k] != eb[j][static_cast<std::size_t>(assign[k])]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[i] = static_cast<int>(j);
      used[j] = 1;
      if (self(self, i + 1)) return true;
      used[j] = 0;
      assign[i] = -1;
    }
    return false;
  };
  return dfs(dfs, 0);
}

}  // namespace snowball
