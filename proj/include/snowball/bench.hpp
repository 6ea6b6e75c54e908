#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"

namespace snowball {

// Benchmark harness comparing the accelerated pipeline (hierarchical bucketing
// + codes + depth-limited search) against a naive direct baseline: unbounded
// McGregor with a full five-criteria comparison at every compatibility check
// and no bucket pre-filter.

struct NaiveResult {
  std::size_t cardinality = 0;
  int matched_edge_count = 0;
  std::uint64_t iterations = 0;
  bool censored = false;  // timeout hit; best-so-far reported
};

NaiveResult naive_direct_match(const FeatureModel& a, const FeatureModel& b,
                               double timeout_sec = 300.0);

struct BenchConfig {
  std::vector<int> sizes = {12, 30, 60, 90};  // average feature count per model
  int trials = 3;
  std::uint64_t seed = 42;
  double timeout_sec = 300.0;
  bool serial = false;
  int accel_depth = 7;
};

struct BenchRow {
  int size = 0;
  int trial = 0;
  std::uint64_t pair_seed = 0;
  double nodes_avg = 0.0;
  double edges_avg = 0.0;
  std::size_t naive_cardinality = 0;
  std::size_t accel_cardinality = 0;
  std::uint64_t naive_nodes = 0;
  std::uint64_t accel_nodes = 0;
  double naive_ms = 0.0;
  double accel_ms = 0.0;
  double speedup = 0.0;        // only meaningful when status == "ok"
  std::string status = "ok";   // ok | timeout | card_mismatch
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string to_csv() const;
  /// Median speedup over the ok rows of one ladder size; 0 when none.
  double median_speedup(int size) const;
  /// Spearman rank correlation between node count and speedup over ok rows.
  double spearman_nodes_speedup() const;
};

/// Run the ladder. Cardinality equality is a per-row correctness gate: a row
/// where naive and accelerated disagree carries no speedup value.
BenchReport run_bench(const BenchConfig& cfg);

/// Spearman rank correlation with average ranks on ties; NaN-free (returns 0
/// for degenerate inputs).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace snowball
