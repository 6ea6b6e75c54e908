#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"
#include "snowball/signatures.hpp"

namespace snowball {

namespace {

// Attribute key for the bijection: type, subtype, face-graph certificate and
// the full sketch descriptor. The certificate is only isomorphism-invariant,
// so candidate pairs still get an exact face-graph isomorphism check.
std::string attribute_key(const Feature& f) {
  std::string key = feature_type_token(f.type, f.type_tag);
  key += '\x1f';
  key += feature_subtype_token(f.subtype, f.subtype_tag);
  key += '\x1f';
  key += criterion_value(f, Criterion::FaceGraph).payload;
  key += '\x1f';
  if (f.sketch) {
    key += sketch_topology_token(f.sketch->topology);
    key += ':' + std::to_string(f.sketch->loop_count);
    key += ':' + std::to_string(f.sketch->linear_edge_count);
    key += ':' + std::to_string(f.sketch->curved_edge_count);
  } else {
    key += "no-sketch";
  }
  return key;
}

struct Side {
  const FeatureModel* model = nullptr;
  std::vector<std::string> keys;              // refined per-node keys
  std::vector<std::vector<std::uint8_t>> adj; // adj[i][j]: edge i -> j
};

Side prepare(const FeatureModel& m) {
  Side s;
  s.model = &m;
  const std::size_t n = m.features.size();
  s.keys.resize(n);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) {
    s.keys[i] = attribute_key(m.features[i]);
    position[m.features[i].id] = i;
  }
  s.adj.assign(n, std::vector<std::uint8_t>(n, 0));
  for (const auto& [p, c] : m.dependencies)
    s.adj[position.at(p)][position.at(c)] = 1;

  // One Weisfeiler-Leman round: fold sorted parent/child key multisets into
  // each node key. Cheap and rejects most non-equal pairs before the search.
  std::vector<std::string> refined(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> in, out;
    for (std::size_t j = 0; j < n; ++j) {
      if (s.adj[j][i]) in.push_back(s.keys[j]);
      if (s.adj[i][j]) out.push_back(s.keys[j]);
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    std::string r = s.keys[i];
    r += "\x1e^";
    for (const auto& k : in) (r += k) += '\x1d';
    r += "\x1ev";
    for (const auto& k : out) (r += k) += '\x1d';
    refined[i] = std::move(r);
  }
  s.keys = std::move(refined);
  return s;
}

}  // namespace

bool canonical_equal(const FeatureModel& a, const FeatureModel& b) {
  const std::size_t n = a.features.size();
  if (n != b.features.size()) return false;
  if (a.dependencies.size() != b.dependencies.size()) return false;
  if (n == 0) return true;

  Side sa = prepare(a);
  Side sb = prepare(b);
  {
    auto ka = sa.keys, kb = sb.keys;
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    if (ka != kb) return false;
  }

  // Candidates per A node, cheapest classes first so failures surface early.
  std::vector<std::vector<std::size_t>> candidates(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sa.keys[i] == sb.keys[j]) candidates[i].push_back(j);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return candidates[x].size() < candidates[y].size();
  });

  // Memoized exact face-graph isomorphism per candidate pair.
  std::map<std::pair<std::size_t, std::size_t>, bool> face_iso;
  auto faces_match = [&](std::size_t i, std::size_t j) {
    auto it = face_iso.find({i, j});
    if (it != face_iso.end()) return it->second;
    bool ok = face_graphs_isomorphic(a.features[i].face_graph, b.features[j].face_graph);
    face_iso[{i, j}] = ok;
    return ok;
  };

  std::vector<int> assign(n, -1);
  std::vector<char> used(n, 0);

  auto dfs = [&](auto&& self, std::size_t step) -> bool {
    if (step == n) return true;
    const std::size_t i = order[step];
    for (std::size_t j : candidates[i]) {
      if (used[j] || !faces_match(i, j)) continue;
      bool ok = true;
      for (std::size_t s = 0; s < step; ++s) {
        const std::size_t k = order[s];
        const std::size_t jk = static_cast<std::size_t>(assign[k]);
        if (sa.adj[i][k] != sb.adj[j][jk] || sa.adj[k][i] != sb.adj[jk][j]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[i] = static_cast<int>(j);
      used[j] = 1;
      if (self(self, step + 1)) return true;
      used[j] = 0;
      assign[i] = -1;
    }
    return false;
  };
  return dfs(dfs, 0);
}

}  // namespace snowball
