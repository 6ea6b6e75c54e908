#include "snowball/matching.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "snowball/errors.hpp"

namespace snowball {

AttributedDependencyGraph build_graph(const FeatureModel& model,
                                      const std::map<std::string, int>& codes) {
  AttributedDependencyGraph g;
  const std::size_t n = model.features.size();
  g.ids.reserve(n);
  g.codes.reserve(n);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = model.features[i];
    auto it = codes.find(f.id);
    if (it == codes.end()) throw DataError("missing code for feature \"" + f.id + "\"");
    g.ids.push_back(f.id);
    g.codes.push_back(it->second);
    position[f.id] = i;
  }
  g.adj.assign(n, std::vector<std::uint8_t>(n, 0));
  for (const auto& [p, c] : model.dependencies) {
    auto pi = position.find(p), ci = position.find(c);
    if (pi == position.end() || ci == position.end()) continue;  // restriction
    if (!g.adj[pi->second][ci->second]) {
      g.adj[pi->second][ci->second] = 1;
      g.edges.emplace_back(static_cast<int>(pi->second), static_cast<int>(ci->second));
    }
  }
  return g;
}

bool is_detail_feature(const Feature& f) {
  if (f.detail_hint) return *f.detail_hint;
  return f.type == FeatureType::Round || f.type == FeatureType::Chamfer ||
         f.type == FeatureType::Hole;
}

std::pair<FeatureModel, std::vector<std::string>> simplify(const FeatureModel& model) {
  const std::size_t n = model.features.size();
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position[model.features[i].id] = i;

  std::vector<std::vector<std::size_t>> children(n);
  for (const auto& [p, c] : model.dependencies) {
    auto pi = position.find(p), ci = position.find(c);
    if (pi != position.end() && ci != position.end())
      children[pi->second].push_back(ci->second);
  }

  // A detail feature survives iff some transitive dependent is non-detail;
  // children come after parents in a valid history, so one reverse pass works.
  std::vector<char> survives(n, 0);
  for (std::size_t ri = n; ri-- > 0;) {
    if (!is_detail_feature(model.features[ri])) {
      survives[ri] = 1;
      continue;
    }
    for (std::size_t c : children[ri]) {
      if (survives[c]) {
        survives[ri] = 1;
        break;
      }
    }
  }

  FeatureModel out;
  out.model_id = model.model_id;
  std::vector<std::string> removed;
  for (std::size_t i = 0; i < n; ++i) {
    if (survives[i])
      out.features.push_back(model.features[i]);
    else
      removed.push_back(model.features[i].id);
  }
  for (const auto& [p, c] : model.dependencies) {
    auto pi = position.find(p), ci = position.find(c);
    if (pi != position.end() && ci != position.end() && survives[pi->second] &&
        survives[ci->second])
      out.add_dependency(p, c);
  }
  return {std::move(out), std::move(removed)};
}

namespace {

// McGregor-style depth-first search for the maximum common induced subgraph
// of two code-attributed DAGs. A nodes are processed in history order; B
// candidates in ascending id order with the skip branch last, which makes the
// first mapping found among equal (cardinality, edge-count) tuples the
// canonical tie-break winner. The oracle reuses the same searcher with
// pruning disabled, so both pick identical mappings.
struct McsSearcher {
  const AttributedDependencyGraph& ga;
  const AttributedDependencyGraph& gb;
  std::optional<int> depth_limit;
  std::optional<std::uint64_t> node_budget;
  bool prune = true;

  std::size_t na = 0, nb = 0;
  std::vector<std::vector<int>> b_by_code;
  std::vector<int> assign;
  std::vector<char> used_b;
  std::vector<int> mapped;

  std::vector<long long> rem_a, avail_b;
  long long bound_sum = 0;
  std::vector<long long> suffix_edges;

  std::vector<int> best_assign;
  long long best_pairs = -1;
  long long best_edges = -1;

  long long cur_pairs = 0, cur_edges = 0;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
  bool committed = false;
  int deepest = -1;

  McsSearcher(const AttributedDependencyGraph& a, const AttributedDependencyGraph& b)
      : ga(a), gb(b), na(a.node_count()), nb(b.node_count()) {
    int max_code = -1;
    for (int c : ga.codes) max_code = std::max(max_code, c);
    for (int c : gb.codes) max_code = std::max(max_code, c);
    const std::size_t ncodes = static_cast<std::size_t>(max_code + 1);

    b_by_code.assign(ncodes, {});
    std::vector<int> b_order(nb);
    std::iota(b_order.begin(), b_order.end(), 0);
    std::sort(b_order.begin(), b_order.end(),
              [&](int x, int y) { return gb.ids[x] < gb.ids[y]; });
    for (int b : b_order) b_by_code[static_cast<std::size_t>(gb.codes[b])].push_back(b);

    assign.assign(na, -1);
    used_b.assign(nb, 0);
    rem_a.assign(ncodes, 0);
    avail_b.assign(ncodes, 0);
    for (int c : ga.codes) ++rem_a[static_cast<std::size_t>(c)];
    for (int c : gb.codes) ++avail_b[static_cast<std::size_t>(c)];
    for (std::size_t c = 0; c < ncodes; ++c) bound_sum += std::min(rem_a[c], avail_b[c]);

    suffix_edges.assign(na + 1, 0);
    std::vector<long long> by_max(na, 0);
    for (const auto& [p, c] : ga.edges) ++by_max[static_cast<std::size_t>(std::max(p, c))];
    for (std::size_t i = na; i-- > 0;) suffix_edges[i] = suffix_edges[i + 1] + by_max[i];
  }

  void adjust_rem(std::size_t code, long long delta) {
    bound_sum -= std::min(rem_a[code], avail_b[code]);
    rem_a[code] += delta;
    bound_sum += std::min(rem_a[code], avail_b[code]);
  }
  void adjust_avail(std::size_t code, long long delta) {
    bound_sum -= std::min(rem_a[code], avail_b[code]);
    avail_b[code] += delta;
    bound_sum += std::min(rem_a[code], avail_b[code]);
  }

  void run() { dfs(0); }

  void dfs(std::size_t i) {
    ++nodes;
    if (node_budget && nodes > *node_budget) {
      budget_exhausted = true;
      return;
    }
    if (static_cast<int>(i) > deepest) deepest = static_cast<int>(i);

    if (i == na) {
      if (cur_pairs > best_pairs || (cur_pairs == best_pairs && cur_edges > best_edges)) {
        best_pairs = cur_pairs;
        best_edges = cur_edges;
        best_assign = assign;
      }
      return;
    }

    if (prune) {
      const long long size_bound = cur_pairs + bound_sum;
      if (size_bound < best_pairs) return;
      if (size_bound == best_pairs && cur_edges + suffix_edges[i] <= best_edges) return;
    }

    const std::size_t code = static_cast<std::size_t>(ga.codes[i]);
    adjust_rem(code, -1);

    bool committed_here = false;
    if (code < b_by_code.size()) {
      for (int b : b_by_code[code]) {
        if (used_b[b]) continue;
        int add_edges = 0;
        bool ok = true;
        for (int j : mapped) {
          const int bj = assign[j];
          const std::uint8_t a_ji = ga.adj[j][i], a_ij = ga.adj[i][j];
          if (a_ji != gb.adj[bj][b] || a_ij != gb.adj[b][bj]) {
            ok = false;
            break;
          }
          add_edges += a_ji + a_ij;
        }
        if (!ok) continue;

        assign[i] = b;
        used_b[b] = 1;
        adjust_avail(code, -1);
        mapped.push_back(static_cast<int>(i));
        cur_pairs += 1;
        cur_edges += add_edges;

        dfs(i + 1);

        cur_edges -= add_edges;
        cur_pairs -= 1;
        mapped.pop_back();
        adjust_avail(code, +1);
        used_b[b] = 0;
        assign[i] = -1;

        if (budget_exhausted) {
          adjust_rem(code, +1);
          return;
        }
        if (depth_limit && deepest - static_cast<int>(i) >= *depth_limit) {
          committed = true;
          committed_here = true;
          break;
        }
      }
    }

    if (!committed_here) {
      assign[i] = -1;
      dfs(i + 1);
    }
    adjust_rem(code, +1);
  }

  MatchResult result() const {
    MatchResult r;
    r.iterations = nodes;
    r.exact = !budget_exhausted && !committed;
    if (best_pairs < 0) return r;  // budget hit before any leaf
    r.matched_edge_count = static_cast<int>(best_edges);
    for (std::size_t i = 0; i < na; ++i)
      if (best_assign[i] >= 0)
        r.pairs.emplace_back(ga.ids[i], gb.ids[static_cast<std::size_t>(best_assign[i])]);
    std::sort(r.pairs.begin(), r.pairs.end());
    return r;
  }
};

}  // namespace

MatchResult mcs(const AttributedDependencyGraph& ga, const AttributedDependencyGraph& gb,
                const SearchConfig& cfg) {
  if (cfg.depth_limit && *cfg.depth_limit < 1)
    throw DataError("depth_limit must be >= 1 when bounded");
  McsSearcher searcher(ga, gb);
  searcher.depth_limit = cfg.depth_limit;
  searcher.node_budget = cfg.node_budget;
  searcher.run();
  return searcher.result();
}

MatchResult mcs_exact_oracle(const AttributedDependencyGraph& ga,
                             const AttributedDependencyGraph& gb, std::size_t max_nodes) {
  if (ga.node_count() > max_nodes || gb.node_count() > max_nodes)
    throw DataError("oracle size bound exceeded: " + std::to_string(ga.node_count()) + "/" +
                    std::to_string(gb.node_count()) + " nodes, bound " +
                    std::to_string(max_nodes));
  McsSearcher searcher(ga, gb);
  searcher.prune = false;
  searcher.run();
  return searcher.result();
}

MatchResult max_common_features(const FeatureModel& a, const FeatureModel& b,
                                const SearchConfig& cfg) {
  FeatureModel sa, sb;
  const FeatureModel* pa = &a;
  const FeatureModel* pb = &b;
  if (cfg.use_simplify) {
    sa = simplify(a).first;
    sb = simplify(b).first;
    pa = &sa;
    pb = &sb;
  }
  HierarchicalResult hier = hierarchical_match(*pa, *pb);
  AttributedDependencyGraph ga = build_graph(*pa, hier.codes.a);
  AttributedDependencyGraph gb = build_graph(*pb, hier.codes.b);
  return mcs(ga, gb, cfg);
}

}  // namespace snowball
