#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snowball/bench.hpp"
#include "snowball/dot_export.hpp"
#include "snowball/errors.hpp"
#include "snowball/family_gen.hpp"
#include "snowball/log.hpp"
#include "snowball/master.hpp"
#include "snowball/matching.hpp"
#include "snowball/model_io.hpp"
#include "snowball/signatures.hpp"
#include "snowball/variant.hpp"

namespace fs = std::filesystem;
using namespace snowball;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
  std::string log_level = "warn";
};

std::uint64_t effective_seed(const GlobalOpts& g, std::optional<std::uint64_t> local = {}) {
  if (local) return *local;
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("SNOWBALL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DataError(std::string("SNOWBALL_SEED is not an integer: \"") + env + "\"");
    }
  }
  return kDefaultSeed;
}

std::optional<int> effective_depth(const GlobalOpts& g, std::optional<int> local = {}) {
  if (local) return local;
  return g.depth;
}

std::vector<fs::path> collect_model_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".model")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw DataError("no model files found in the given inputs");
  return files;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
}

int cmd_validate(const std::vector<std::string>& files) {
  bool any = false;
  for (const auto& file : files) {
    FeatureModel m = load_model_file(file, /*check_valid=*/false);
    auto violations = validate(m);
    if (violations.empty()) {
      std::cout << file << ": ok (" << m.features.size() << " features, "
                << m.dependencies.size() << " dependencies)\n";
      continue;
    }
    any = true;
    std::cout << file << ": " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) {
      std::cout << "  " << v.rule;
      if (!v.feature_id.empty()) std::cout << " [" << v.feature_id << "]";
      if (!v.detail.empty()) std::cout << ": " << v.detail;
      std::cout << "\n";
    }
  }
  return any ? 2 : 0;
}

void dump_buckets(const FeatureModel& a, const FeatureModel& b) {
  HierarchicalResult hier = hierarchical_match(a, b);
  std::cout << "code,payload_digest,model_a_members,model_b_members\n";
  for (const auto& bucket : hier.final_buckets.buckets) {
    std::cout << bucket.index << "," << std::hex << std::setw(16) << std::setfill('0')
              << payload_digest(bucket.payload) << std::dec << std::setfill(' ') << ",";
    for (std::size_t i = 0; i < bucket.sub_a.size(); ++i)
      std::cout << (i ? " " : "") << bucket.sub_a[i];
    std::cout << ",";
    for (std::size_t i = 0; i < bucket.sub_b.size(); ++i)
      std::cout << (i ? " " : "") << bucket.sub_b[i];
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snowball — master-model toolkit for structural families of feature models"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "Seed for all randomized commands");
  app.add_option("--depth", global.depth, "Backtracking depth limit for matching");
  app.add_option("--log-level", global.log_level, "error|warn|info|debug")
      ->default_str("warn");

  // match
  std::string match_a, match_b;
  std::optional<int> match_depth;
  std::optional<std::uint64_t> match_budget;
  bool match_simplify = false, match_exact = false, match_dump = false;
  auto* match_cmd = app.add_subcommand("match", "Maximum common feature set of two models");
  match_cmd->add_option("a", match_a, "First model file")->required();
  match_cmd->add_option("b", match_b, "Second model file")->required();
  match_cmd->add_option("--depth", match_depth, "Depth limit (unbounded when absent)");
  match_cmd->add_option("--budget", match_budget, "Search-node budget");
  match_cmd->add_flag("--simplify", match_simplify, "Remove detail features before matching");
  match_cmd->add_flag("--exact", match_exact, "Force unbounded search");
  match_cmd->add_flag("--dump-buckets", match_dump, "Dump final rough-matching buckets");

  // master
  std::vector<std::string> master_inputs;
  std::string master_out, master_core, master_report;
  std::optional<int> master_depth;
  auto* master_cmd = app.add_subcommand("master", "Generate the family master model");
  master_cmd->add_option("inputs", master_inputs, "Model files or a directory")->required();
  master_cmd->add_option("-o,--output", master_out, "Master output file")->required();
  master_cmd->add_option("--core", master_core, "Also write the structural core");
  master_cmd->add_option("--report", master_report, "Write per-iteration CSV report");
  master_cmd->add_option("--depth", master_depth, "Depth limit for matching");

  // variant
  std::string variant_master, variant_script, variant_out;
  bool variant_report = false;
  auto* variant_cmd = app.add_subcommand("variant", "Derive a new design from a master model");
  variant_cmd->add_option("master", variant_master, "Master model file")->required();
  variant_cmd->add_option("--script", variant_script, "Variant script (JSON)")->required();
  variant_cmd->add_option("-o,--output", variant_out, "Variant output file")->required();
  variant_cmd->add_flag("--report", variant_report, "Print an application report");

  // gen
  int gen_models = 5, gen_core = 10;
  std::string gen_details = "2:4", gen_outdir;
  double gen_overlap = 0.3, gen_jitter = 0.1;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic structural family");
  gen_cmd->add_option("--models", gen_models, "Family size")->default_val(5);
  gen_cmd->add_option("--core", gen_core, "Planted core size")->default_val(10);
  gen_cmd->add_option("--details", gen_details, "Detail count range lo:hi")->default_str("2:4");
  gen_cmd->add_option("--overlap", gen_overlap, "Detail clone probability")->default_val(0.3);
  gen_cmd->add_option("--jitter", gen_jitter, "Parameter jitter")->default_val(0.1);
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("-o,--output", gen_outdir, "Output directory")->required();

  // bench
  std::vector<int> bench_sizes = {12, 30, 60, 90};
  int bench_trials = 3;
  double bench_timeout = 300.0;
  bool bench_serial = false;
  std::optional<std::uint64_t> bench_seed;
  std::optional<int> bench_depth;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Accelerated vs naive matching benchmark");
  bench_cmd->add_option("--sizes", bench_sizes, "Ladder of average model sizes");
  bench_cmd->add_option("--trials", bench_trials, "Trials per size")->default_val(3);
  bench_cmd->add_option("--timeout", bench_timeout, "Per-trial timeout (s)")->default_val(300.0);
  bench_cmd->add_flag("--serial", bench_serial, "Run trials sequentially for clean timings");
  bench_cmd->add_option("--seed", bench_seed, "Benchmark seed");
  bench_cmd->add_option("--depth", bench_depth, "Accelerated pipeline depth limit");
  bench_cmd->add_option("-o,--output", bench_out, "CSV output file (stdout when absent)");

  // dot
  std::string dot_in, dot_out;
  bool dot_codes = false;
  auto* dot_cmd = app.add_subcommand("dot", "Export a model as a DOT digraph");
  dot_cmd->add_option("model", dot_in, "Model or master file")->required();
  dot_cmd->add_option("-o,--output", dot_out, "DOT output file (stdout when absent)");
  dot_cmd->add_flag("--codes", dot_codes, "Label nodes with self-match codes");

  // validate
  std::vector<std::string> validate_files;
  auto* validate_cmd = app.add_subcommand("validate", "Check model invariants");
  validate_cmd->add_option("files", validate_files, "Model files")->required();

  try {
    app.parse(argc, argv);
    set_log_level(log_level_from_token(global.log_level));

    if (*validate_cmd) return cmd_validate(validate_files);

    if (*match_cmd) {
      FeatureModel a = load_model_file(match_a);
      FeatureModel b = load_model_file(match_b);
      SearchConfig cfg;
      cfg.use_simplify = match_simplify;
      cfg.node_budget = match_budget;
      if (!match_exact) cfg.depth_limit = effective_depth(global, match_depth);
      if (match_dump) {
        if (match_simplify) {
          dump_buckets(simplify(a).first, simplify(b).first);
        } else {
          dump_buckets(a, b);
        }
      }
      MatchResult r = max_common_features(a, b, cfg);
      for (const auto& [ia, ib] : r.pairs) std::cout << ia << "\t" << ib << "\n";
      std::cout << "cardinality: " << r.pairs.size() << "\n";
      std::cout << "matched_edges: " << r.matched_edge_count << "\n";
      std::cout << "search_nodes: " << r.iterations << "\n";
      std::cout << "exact: " << (r.exact ? "true" : "false") << "\n";
      return 0;
    }

    if (*master_cmd) {
      std::vector<FeatureModel> family;
      for (const auto& file : collect_model_files(master_inputs))
        family.push_back(load_model_file(file));
      SearchConfig cfg;
      cfg.depth_limit = effective_depth(global, master_depth);
      auto [master, report] = roll(family, cfg);
      save_master_file(master, master_out);
      if (!master_core.empty()) save_model_file(extract_core(master), master_core);
      if (!master_report.empty()) write_text(master_report, report.to_csv());
      std::cout << "master: " << master.model.features.size() << " features, core "
                << report.core_ids.size() << ", family " << master.family_size << "\n";
      return 0;
    }

    if (*variant_cmd) {
      MasterModel master = load_master_file(variant_master);
      VariantScript script = load_script_file(variant_script);
      const std::set<std::string> core = master.core_ids();
      VariantReport rep;
      FeatureModel variant =
          apply_script(master.model, script, master.family_size >= 2 ? &core : nullptr, &rep);
      for (const auto& id : rep.core_breaks)
        logf(LogLevel::Warn, "core break: suppressed core feature \"", id, "\"");
      save_model_file(variant, variant_out);
      if (variant_report) {
        std::cout << "removed: " << rep.removed.size() << "\n";
        for (const auto& id : rep.removed) std::cout << "  " << id << "\n";
        std::cout << "core_breaks: " << rep.core_breaks.size() << "\n";
        for (const auto& id : rep.core_breaks) std::cout << "  " << id << "\n";
        std::cout << "added: " << rep.added_ids.size() << "\n";
        for (const auto& id : rep.added_ids) std::cout << "  " << id << "\n";
        std::cout << "params_changed: " << rep.params_changed << "\n";
      }
      return 0;
    }

    if (*gen_cmd) {
      GenConfig cfg;
      cfg.family_size = gen_models;
      cfg.core_size = gen_core;
      const auto colon = gen_details.find(':');
      if (colon == std::string::npos)
        throw DataError("--details expects lo:hi, got \"" + gen_details + "\"");
      cfg.detail_min = std::stoi(gen_details.substr(0, colon));
      cfg.detail_max = std::stoi(gen_details.substr(colon + 1));
      cfg.detail_overlap_probability = gen_overlap;
      cfg.param_jitter = gen_jitter;
      cfg.rng_seed = effective_seed(global, gen_seed);
      GeneratedFamily fam = gen_family(cfg);
      fs::create_directories(gen_outdir);
      for (const auto& m : fam.members)
        save_model_file(m, fs::path(gen_outdir) / (m.model_id + ".model"));
      write_text((fs::path(gen_outdir) / "truth.json").string(), truth_to_json(fam.truth));
      std::cout << "wrote " << fam.members.size() << " members + truth.json to " << gen_outdir
                << "\n";
      return 0;
    }

    if (*bench_cmd) {
      BenchConfig cfg;
      cfg.sizes = bench_sizes;
      cfg.trials = bench_trials;
      cfg.seed = effective_seed(global, bench_seed);
      cfg.timeout_sec = bench_timeout;
      cfg.serial = bench_serial;
      cfg.accel_depth = effective_depth(global, bench_depth).value_or(7);
      BenchReport report = run_bench(cfg);
      const std::string csv = report.to_csv();
      if (bench_out.empty())
        std::cout << csv;
      else
        write_text(bench_out, csv);
      for (int size : cfg.sizes)
        logf(LogLevel::Info, "size ", size, ": median speedup ", report.median_speedup(size));
      logf(LogLevel::Info, "spearman(nodes, speedup) = ", report.spearman_nodes_speedup());
      return 0;
    }

    if (*dot_cmd) {
      MasterModel master = load_master_file(dot_in);
      DotOptions options;
      options.include_codes = dot_codes;
      const std::string dot = master.family_size >= 2 ? export_dot(master, options)
                                                      : export_dot(master.model, options);
      if (dot_out.empty())
        std::cout << dot;
      else
        write_text(dot_out, dot);
      return 0;
    }

    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal assertion: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
