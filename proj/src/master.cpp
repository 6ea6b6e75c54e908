#include "snowball/master.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "snowball/errors.hpp"
#include "snowball/log.hpp"
#include "snowball/rng.hpp"

namespace snowball {

std::set<std::string> MasterModel::core_ids() const {
  std::set<std::string> out;
  for (const auto& [id, prov] : provenance)
    if (prov.match_count == family_size - 1) out.insert(id);
  return out;
}

std::string CoreReport::to_csv() const {
  std::ostringstream os;
  os << "iteration,model_id,common_count,master_size,elapsed_ms\n";
  for (const auto& row : iterations)
    os << row.iteration << "," << row.model_id << "," << row.common_count << ","
       << row.master_size << "," << row.elapsed_ms << "\n";
  return os.str();
}

MasterModel init_master(const FeatureModel& first) {
  MasterModel master;
  master.model = first;
  master.family_size = 1;
  for (const auto& f : first.features)
    master.provenance[f.id] = Provenance{{first.model_id}, 0};
  return master;
}

namespace {

std::string fresh_id(const std::string& model_id, const std::string& orig,
                     const std::set<std::string>& taken) {
  std::string base = model_id + "." + orig;
  std::string candidate = base;
  for (int n = 2; taken.count(candidate); ++n) candidate = base + "#" + std::to_string(n);
  return candidate;
}

}  // namespace

MasterModel merge(const MasterModel& master, const FeatureModel& m, const MatchResult& match) {
  std::map<std::string, std::string> counterpart;  // m id -> master id
  std::set<std::string> matched_master;
  for (const auto& [master_id, m_id] : match.pairs) {
    counterpart[m_id] = master_id;
    matched_master.insert(master_id);
  }

  std::set<std::string> m_ids;
  for (const auto& f : m.features) m_ids.insert(f.id);

  std::set<std::string> taken;
  for (const auto& f : master.model.features) taken.insert(f.id);

  // Fresh ids for the unmatched features of m, in m's history order.
  std::map<std::string, std::string> new_id;  // m id -> master id
  std::vector<const Feature*> appended_src;
  for (const auto& f : m.features) {
    if (counterpart.count(f.id)) continue;
    std::string id = fresh_id(m.model_id, f.id, taken);
    taken.insert(id);
    new_id[f.id] = id;
    appended_src.push_back(&f);
  }
  auto remap = [&](const std::string& m_feature) -> const std::string& {
    auto it = counterpart.find(m_feature);
    if (it != counterpart.end()) return it->second;
    auto nit = new_id.find(m_feature);
    if (nit == new_id.end())
      throw DataError("dangling parent: feature \"" + m_feature +
                      "\" of model \"" + m.model_id + "\" resolves to nothing");
    return nit->second;
  };

  // Assemble the node set: master features first, then appended copies.
  std::vector<Feature> nodes = master.model.features;
  for (const Feature* src : appended_src) {
    Feature copy = *src;
    copy.id = new_id.at(src->id);
    nodes.push_back(std::move(copy));
  }
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < nodes.size(); ++i) position[nodes[i].id] = i;

  // Merged edge set: every master edge, plus every m edge remapped. Edges
  // between two matched features must already exist (induced compatibility).
  std::set<std::pair<std::string, std::string>> edges(master.model.dependencies.begin(),
                                                      master.model.dependencies.end());
  for (const auto& [p, c] : m.dependencies) {
    if (!m_ids.count(p) || !m_ids.count(c))
      throw DataError("dangling parent: edge " + p + " -> " + c + " of model \"" + m.model_id +
                      "\" references a missing feature");
    const bool both_matched = counterpart.count(p) && counterpart.count(c);
    const std::string rp = remap(p);
    const std::string rc = remap(c);
    if (both_matched) {
      if (!edges.count({rp, rc}))
        throw DataError("match violates induced compatibility: edge " + p + " -> " + c +
                        " of model \"" + m.model_id + "\" has no master counterpart");
      continue;
    }
    edges.insert({rp, rc});
  }

  // Deterministic topological completion: master features keep their order,
  // appended features follow in source order but are pulled forward just far
  // enough when they are dependency parents of matched features.
  std::vector<std::vector<std::size_t>> children(nodes.size());
  std::vector<int> indegree(nodes.size(), 0);
  for (const auto& [p, c] : edges) {
    children[position.at(p)].push_back(position.at(c));
    ++indegree[position.at(c)];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(nodes.size());
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t c : children[i])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() < nodes.size())
    throw DataError("merge would create a dependency cycle; models \"" +
                    master.model.model_id + "\" and \"" + m.model_id +
                    "\" do not form a structural family");

  MasterModel out;
  out.model.model_id = master.model.model_id;
  out.model.features.reserve(nodes.size());
  for (std::size_t i : order) out.model.features.push_back(nodes[i]);
  for (const auto& [p, c] : edges) out.model.add_dependency(p, c);

  out.family_size = master.family_size;
  out.provenance = master.provenance;
  for (const auto& [master_id, m_id] : match.pairs) {
    (void)m_id;
    auto& prov = out.provenance[master_id];
    prov.sources.insert(m.model_id);
    prov.match_count += 1;
  }
  for (const auto& [m_feature, id] : new_id) {
    (void)m_feature;
    out.provenance[id] = Provenance{{m.model_id}, 0};
  }

  auto violations = validate(out.model);
  if (!violations.empty())
    throw std::logic_error("merge produced an invalid model: " + violations.front().rule +
                           " (" + violations.front().feature_id + ")");
  return out;
}

std::pair<MasterModel, CoreReport> roll(const std::vector<FeatureModel>& family,
                                        const SearchConfig& cfg) {
  if (family.size() < 2) throw DataError("family must contain at least 2 models");
  {
    std::set<std::string> ids;
    for (const auto& m : family)
      if (!ids.insert(m.model_id).second)
        throw DataError("duplicate model id in family: \"" + m.model_id + "\"");
  }

  // Simplification stays off: removed detail features would bypass the
  // merge-time deduplication that later iterations rely on.
  SearchConfig match_cfg = cfg;
  match_cfg.use_simplify = false;

  MasterModel master = init_master(family[0]);
  CoreReport report;
  for (std::size_t i = 1; i < family.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    MatchResult match = max_common_features(master.model, family[i], match_cfg);
    master = merge(master, family[i], match);
    master.family_size = static_cast<int>(i) + 1;
    const auto t1 = std::chrono::steady_clock::now();

    IterationRow row;
    row.iteration = static_cast<int>(i);
    row.model_id = family[i].model_id;
    row.common_count = match.pairs.size();
    row.master_size = master.model.features.size();
    row.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report.iterations.push_back(row);
  }

  auto core = master.core_ids();
  report.core_ids.assign(core.begin(), core.end());
  report.smallest_iteration = 0;
  std::size_t smallest = SIZE_MAX;
  for (const auto& row : report.iterations) {
    if (row.common_count < smallest) {
      smallest = row.common_count;
      report.smallest_iteration = row.iteration;
    }
  }
  return {std::move(master), std::move(report)};
}

FeatureModel extract_core(const MasterModel& master) {
  const std::set<std::string> core = master.core_ids();
  for (const auto& [p, c] : master.model.dependencies) {
    if (core.count(c) && !core.count(p))
      throw DataError("non-closed core: core feature \"" + c +
                      "\" depends on non-core feature \"" + p + "\"");
  }
  FeatureModel out;
  out.model_id = master.model.model_id + "-core";
  for (const auto& f : master.model.features)
    if (core.count(f.id)) out.features.push_back(f);
  for (const auto& [p, c] : master.model.dependencies)
    if (core.count(p) && core.count(c)) out.add_dependency(p, c);
  return out;
}

OrderIndependenceReport check_order_independence(const std::vector<FeatureModel>& family,
                                                 const SearchConfig& cfg, std::size_t perm_cap,
                                                 std::uint64_t sample_seed) {
  if (family.size() < 2) throw DataError("family must contain at least 2 models");

  const std::size_t k = family.size();
  std::size_t total = 1;
  bool overflow = false;
  for (std::size_t i = 2; i <= k; ++i) {
    total *= i;
    if (total > perm_cap) {
      overflow = true;
      break;
    }
  }

  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> base(k);
  for (std::size_t i = 0; i < k; ++i) base[i] = i;
  if (!overflow) {
    std::vector<std::size_t> p = base;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  } else {
    perms.push_back(base);  // include the given order
    Rng rng(sample_seed);
    while (perms.size() < perm_cap) {
      std::vector<std::size_t> p = base;
      for (std::size_t i = k; i > 1; --i)
        std::swap(p[i - 1], p[rng.index(i)]);
      perms.push_back(std::move(p));
    }
  }

  struct PermOutcome {
    FeatureModel master;
    FeatureModel core;
    std::size_t master_size = 0;
    std::size_t core_size = 0;
  };
  auto run_one = [&](const std::vector<std::size_t>& perm) {
    std::vector<FeatureModel> ordered;
    ordered.reserve(k);
    for (std::size_t idx : perm) ordered.push_back(family[idx]);
    auto [master, report] = roll(ordered, cfg);
    (void)report;
    PermOutcome o;
    o.master_size = master.model.features.size();
    o.core = extract_core(master);
    o.core_size = o.core.features.size();
    o.master = std::move(master.model);
    return o;
  };

  std::vector<PermOutcome> outcomes(perms.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     perms.size()));
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= perms.size()) return;
        outcomes[i] = run_one(perms[i]);
      }
    }));
  }
  for (auto& f : futs) f.get();

  OrderIndependenceReport report;
  report.masters_all_equal = true;
  report.cores_all_equal = true;
  report.min_core_size = SIZE_MAX;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    OrderIndependenceReport::Row row;
    row.order = perms[i];
    row.master_size = outcomes[i].master_size;
    row.core_size = outcomes[i].core_size;
    report.rows.push_back(std::move(row));
    report.min_core_size = std::min(report.min_core_size, outcomes[i].core_size);

    // canonical_equal is an equivalence relation, so comparing everything to
    // the first permutation decides pairwise equality.
    if (i > 0 && report.masters_all_equal &&
        !canonical_equal(outcomes[0].master, outcomes[i].master)) {
      report.masters_all_equal = false;
      report.first_master_mismatch = {0, i};
      logf(LogLevel::Warn, "order-independence mismatch: permutation ", i,
           " master differs from permutation 0");
    }
    if (i > 0 && report.cores_all_equal && !canonical_equal(outcomes[0].core, outcomes[i].core))
      report.cores_all_equal = false;
  }
  return report;
}

}  // namespace snowball
