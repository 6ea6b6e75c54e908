#include "snowball/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "snowball/family_gen.hpp"
#include "snowball/matching.hpp"
#include "snowball/rng.hpp"
#include "snowball/signatures.hpp"

namespace snowball {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Direct subgraph-isomorphism baseline: the classic McGregor bound
// (mapped + remaining), no bucket pre-filter, and the full five-criteria
// attribute comparison recomputed at every compatibility check.
struct NaiveSearcher {
  const FeatureModel& ma;
  const FeatureModel& mb;
  std::size_t na, nb;
  std::vector<std::vector<std::uint8_t>> adj_a, adj_b;
  std::vector<long long> suffix_edges;

  std::vector<int> assign;
  std::vector<char> used_b;
  std::vector<int> mapped;

  long long best_pairs = -1, best_edges = -1;
  long long cur_pairs = 0, cur_edges = 0;
  std::uint64_t nodes = 0;
  bool censored = false;

  Clock::time_point deadline;

  NaiveSearcher(const FeatureModel& a, const FeatureModel& b, double timeout_sec)
      : ma(a), mb(b), na(a.features.size()), nb(b.features.size()) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(timeout_sec));
    auto build_adj = [](const FeatureModel& m) {
      std::map<std::string, std::size_t> pos;
      for (std::size_t i = 0; i < m.features.size(); ++i) pos[m.features[i].id] = i;
      std::vector<std::vector<std::uint8_t>> adj(
          m.features.size(), std::vector<std::uint8_t>(m.features.size(), 0));
      for (const auto& [p, c] : m.dependencies) adj[pos.at(p)][pos.at(c)] = 1;
      return adj;
    };
    adj_a = build_adj(a);
    adj_b = build_adj(b);

    suffix_edges.assign(na + 1, 0);
    std::vector<long long> by_max(na, 0);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j)
        if (adj_a[i][j]) ++by_max[std::max(i, j)];
    for (std::size_t i = na; i-- > 0;) suffix_edges[i] = suffix_edges[i + 1] + by_max[i];

    assign.assign(na, -1);
    used_b.assign(nb, 0);
  }

  bool attributes_equal(const Feature& fa, const Feature& fb) const {
    for (Criterion c : kDefaultCriteria)
      if (criterion_value(fa, c).payload != criterion_value(fb, c).payload) return false;
    return true;
  }

  void dfs(std::size_t i) {
    ++nodes;
    if ((nodes & 0x3ff) == 0 && Clock::now() > deadline) {
      censored = true;
      return;
    }
    if (i == na) {
      if (cur_pairs > best_pairs || (cur_pairs == best_pairs && cur_edges > best_edges)) {
        best_pairs = cur_pairs;
        best_edges = cur_edges;
      }
      return;
    }
    const long long size_bound = cur_pairs + static_cast<long long>(na - i);
    if (size_bound < best_pairs) return;
    if (size_bound == best_pairs && cur_edges + suffix_edges[i] <= best_edges) return;

    const Feature& fa = ma.features[i];
    for (std::size_t b = 0; b < nb; ++b) {
      if (used_b[b]) continue;
      if (!attributes_equal(fa, mb.features[b])) continue;
      int add_edges = 0;
      bool ok = true;
      for (int j : mapped) {
        const std::size_t bj = static_cast<std::size_t>(assign[j]);
        const std::uint8_t a_ji = adj_a[j][i], a_ij = adj_a[i][j];
        if (a_ji != adj_b[bj][b] || a_ij != adj_b[b][bj]) {
          ok = false;
          break;
        }
        add_edges += a_ji + a_ij;
      }
      if (!ok) continue;

      assign[i] = static_cast<int>(b);
      used_b[b] = 1;
      mapped.push_back(static_cast<int>(i));
      cur_pairs += 1;
      cur_edges += add_edges;
      dfs(i + 1);
      cur_edges -= add_edges;
      cur_pairs -= 1;
      mapped.pop_back();
      used_b[b] = 0;
      assign[i] = -1;
      if (censored) return;
    }
    assign[i] = -1;
    dfs(i + 1);
  }
};

}  // namespace

NaiveResult naive_direct_match(const FeatureModel& a, const FeatureModel& b,
                               double timeout_sec) {
  NaiveSearcher searcher(a, b, timeout_sec);
  searcher.dfs(0);
  NaiveResult r;
  r.cardinality = searcher.best_pairs < 0 ? 0 : static_cast<std::size_t>(searcher.best_pairs);
  r.matched_edge_count = searcher.best_edges < 0 ? 0 : static_cast<int>(searcher.best_edges);
  r.iterations = searcher.nodes;
  r.censored = searcher.censored;
  return r;
}

std::string BenchReport::to_csv() const {
  std::ostringstream os;
  os << "size,trial,pair_seed,nodes_avg,edges_avg,naive_cardinality,accel_cardinality,"
        "naive_nodes,accel_nodes,naive_ms,accel_ms,speedup,status\n";
  for (const auto& r : rows) {
    os << r.size << "," << r.trial << "," << r.pair_seed << "," << r.nodes_avg << ","
       << r.edges_avg << "," << r.naive_cardinality << "," << r.accel_cardinality << ","
       << r.naive_nodes << "," << r.accel_nodes << "," << r.naive_ms << "," << r.accel_ms
       << ",";
    if (r.status == "ok") os << r.speedup;
    os << "," << r.status << "\n";
  }
  return os.str();
}

double BenchReport::median_speedup(int size) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.size == size && r.status == "ok") v.push_back(r.speedup);
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double BenchReport::spearman_nodes_speedup() const {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    x.push_back(r.nodes_avg);
    y.push_back(r.speedup);
  }
  return spearman(x, y);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return 0.0;

  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx <= 0 || dy <= 0) return 0.0;
  return num / std::sqrt(dx * dy);
}

BenchReport run_bench(const BenchConfig& cfg) {
  struct Task {
    int size;
    int trial;
  };
  std::vector<Task> tasks;
  for (int size : cfg.sizes)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({size, t});

  auto run_task = [&](const Task& task) {
    BenchRow row;
    row.size = task.size;
    row.trial = task.trial;
    row.pair_seed =
        Rng::mix(cfg.seed, static_cast<std::uint64_t>(task.size) * 1009 + task.trial);

    GenConfig gen;
    gen.family_size = 2;
    gen.core_size = std::max(1, (task.size * 3) / 4);
    gen.detail_min = gen.detail_max = std::max(0, task.size - gen.core_size);
    gen.detail_overlap_probability = 0.3;
    gen.param_jitter = 0.1;
    gen.rng_seed = row.pair_seed;
    GeneratedFamily fam = gen_family(gen);
    const FeatureModel& a = fam.members[0];
    const FeatureModel& b = fam.members[1];
    row.nodes_avg = 0.5 * static_cast<double>(a.features.size() + b.features.size());
    row.edges_avg = 0.5 * static_cast<double>(a.dependencies.size() + b.dependencies.size());

    {
      const auto t0 = Clock::now();
      HierarchicalResult hier = hierarchical_match(a, b);
      AttributedDependencyGraph ga = build_graph(a, hier.codes.a);
      AttributedDependencyGraph gb = build_graph(b, hier.codes.b);
      SearchConfig sc;
      sc.depth_limit = cfg.accel_depth;
      MatchResult mr = mcs(ga, gb, sc);
      row.accel_ms = ms_since(t0);
      row.accel_cardinality = mr.pairs.size();
      row.accel_nodes = mr.iterations;
    }
    {
      const auto t0 = Clock::now();
      NaiveResult nr = naive_direct_match(a, b, cfg.timeout_sec);
      row.naive_ms = ms_since(t0);
      row.naive_cardinality = nr.cardinality;
      row.naive_nodes = nr.iterations;
      if (nr.censored) row.status = "timeout";
    }
    // Correctness gate: a speedup is only reported when both methods agree.
    if (row.status == "ok" && row.naive_cardinality != row.accel_cardinality)
      row.status = "card_mismatch";
    if (row.status == "ok" && row.accel_ms > 0.0) row.speedup = row.naive_ms / row.accel_ms;
    return row;
  };

  BenchReport report;
  report.rows.resize(tasks.size());
  if (cfg.serial || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) report.rows[i] = run_task(tasks[i]);
  } else {
    const std::size_t workers = std::max<std::size_t>(
        1, std::min<std::size_t>(std::thread::hardware_concurrency(), tasks.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    for (std::size_t w = 0; w < workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&]() {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          report.rows[i] = run_task(tasks[i]);
        }
      }));
    }
    for (auto& f : futs) f.get();
  }
  return report;
}

}  // namespace snowball
