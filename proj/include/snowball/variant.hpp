#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "snowball/feature_model.hpp"

namespace snowball {

// Variational design on a master model: suppress detail features, graft new
// feature fragments, edit parameter values. All transformations are pure.

struct VariantScript {
  struct Addition {
    FeatureModel fragment;  // may reference external parents (placeholders)
    std::map<std::string, std::string> attachments;  // placeholder -> feature id
  };
  struct ParamAssignment {
    std::string feature_id;
    std::string name;
    double value = 0.0;
  };

  std::vector<std::string> suppress;
  std::vector<Addition> add;
  std::vector<ParamAssignment> set_params;
};

/// Remove the listed features plus the full closure of their transitive
/// dependents. `removed_closure`, when given, receives the removed ids in
/// history order. Throws DataError on unknown ids.
FeatureModel suppress(const FeatureModel& model, const std::vector<std::string>& ids,
                      std::vector<std::string>* removed_closure = nullptr);

/// Append the fragment's features with fresh ids, preserving internal
/// dependencies and rewiring external parents per `attachments`. Throws
/// DataError on unresolved placeholders or unknown attachment targets.
FeatureModel add_features(const FeatureModel& model, const FeatureModel& fragment,
                          const std::map<std::string, std::string>& attachments);

/// Replace parameter values; everything else stays identical. Throws DataError
/// on unknown features or parameter names.
FeatureModel set_params(const FeatureModel& model,
                        const std::vector<VariantScript::ParamAssignment>& assignments);

struct VariantReport {
  std::vector<std::string> removed;      // suppression closure, history order
  std::vector<std::string> core_breaks;  // suppressed features that were core
  std::vector<std::string> added_ids;
  int params_changed = 0;
};

/// Apply a script in suppress -> add -> set_params order. When `core_ids` is
/// given, suppressing a core feature produces a core-break warning in the
/// report (not an error).
FeatureModel apply_script(const FeatureModel& master, const VariantScript& script,
                          const std::set<std::string>* core_ids = nullptr,
                          VariantReport* report = nullptr);

/// Parse the on-disk script format (mirrors the VariantScript fields).
VariantScript load_script(const std::string& text);
VariantScript load_script_file(const std::string& path);

}  // namespace snowball
