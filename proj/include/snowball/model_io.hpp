#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "snowball/feature_model.hpp"
#include "snowball/master.hpp"

namespace snowball {

inline constexpr int kFormatVersion = 1;

/// Parse an interchange document. Throws ParseError on malformed text
/// (message names the byte offset), SchemaError on unknown tokens or missing
/// fields (message names the field path), DataError when `check_valid` is set
/// and the loaded model violates its invariants.
FeatureModel load_model(const std::string& text, bool check_valid = true);
FeatureModel load_model_file(const std::filesystem::path& path, bool check_valid = true);

std::string save_model(const FeatureModel& model);
void save_model_file(const FeatureModel& model, const std::filesystem::path& path);

/// Master documents are plain interchange documents with an extra optional
/// top-level "master" object carrying family size and provenance. load_model
/// on a master file simply ignores the extension.
MasterModel load_master(const std::string& text);
MasterModel load_master_file(const std::filesystem::path& path);
std::string save_master(const MasterModel& master);
void save_master_file(const MasterModel& master, const std::filesystem::path& path);

/// Building blocks shared with script/truth readers. model_from_json does not
/// validate and, with `allow_external_parents`, tolerates dependency edges
/// whose parent is not a feature of the model (variant fragments).
nlohmann::json model_to_json(const FeatureModel& model);
FeatureModel model_from_json(const nlohmann::json& j, const std::string& path = "$",
                             bool allow_external_parents = false);

}  // namespace snowball
