#pragma once

#include <map>
#include <string>

#include "snowball/feature_model.hpp"
#include "snowball/master.hpp"

namespace snowball {

struct DotOptions {
  /// Label nodes with self-match feature codes.
  bool include_codes = false;
};

/// Deterministic DOT digraph of the dependency structure; byte-identical for
/// identical inputs.
std::string export_dot(const FeatureModel& model, const DotOptions& options = {});

/// Master variant: core features (matched in every iteration) are styled
/// distinctly.
std::string export_dot(const MasterModel& master, const DotOptions& options = {});

}  // namespace snowball
