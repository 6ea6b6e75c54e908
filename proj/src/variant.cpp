#include "snowball/variant.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "snowball/errors.hpp"
#include "snowball/model_io.hpp"

namespace snowball {

using nlohmann::json;

FeatureModel suppress(const FeatureModel& model, const std::vector<std::string>& ids,
                      std::vector<std::string>* removed_closure) {
  std::set<std::string> doomed;
  for (const auto& id : ids) {
    if (!model.has_feature(id)) throw DataError("unknown feature id: \"" + id + "\"");
    doomed.insert(id);
  }

  // Dependency closure: removing a feature removes all transitive dependents.
  // Children come after parents in a valid history, one forward pass suffices.
  for (const auto& f : model.features) {
    if (doomed.count(f.id)) continue;
    for (const auto& p : model.parents_of(f.id)) {
      if (doomed.count(p)) {
        doomed.insert(f.id);
        break;
      }
    }
  }

  FeatureModel out;
  out.model_id = model.model_id;
  for (const auto& f : model.features) {
    if (doomed.count(f.id)) {
      if (removed_closure) removed_closure->push_back(f.id);
    } else {
      out.features.push_back(f);
    }
  }
  for (const auto& [p, c] : model.dependencies)
    if (!doomed.count(p) && !doomed.count(c)) out.add_dependency(p, c);
  return out;
}

FeatureModel add_features(const FeatureModel& model, const FeatureModel& fragment,
                          const std::map<std::string, std::string>& attachments) {
  std::set<std::string> fragment_ids;
  for (const auto& f : fragment.features) fragment_ids.insert(f.id);

  std::set<std::string> taken;
  for (const auto& f : model.features) taken.insert(f.id);

  const std::string prefix = fragment.model_id.empty() ? "frag" : fragment.model_id;
  std::map<std::string, std::string> new_id;
  for (const auto& f : fragment.features) {
    std::string base = prefix + "." + f.id;
    std::string candidate = base;
    for (int n = 2; taken.count(candidate); ++n) candidate = base + "#" + std::to_string(n);
    taken.insert(candidate);
    new_id[f.id] = candidate;
  }

  FeatureModel out = model;
  for (const auto& f : fragment.features) {
    Feature copy = f;
    copy.id = new_id.at(f.id);
    out.features.push_back(std::move(copy));
  }
  for (const auto& [p, c] : fragment.dependencies) {
    if (!fragment_ids.count(c))
      throw DataError("fragment edge child \"" + c + "\" is not a fragment feature");
    const std::string& child = new_id.at(c);
    if (fragment_ids.count(p)) {
      out.add_dependency(new_id.at(p), child);
      continue;
    }
    auto att = attachments.find(p);
    if (att == attachments.end())
      throw DataError("unresolved placeholder: fragment parent \"" + p +
                      "\" has no attachment");
    if (!model.has_feature(att->second))
      throw DataError("attachment target \"" + att->second + "\" is not a feature of \"" +
                      model.model_id + "\"");
    out.add_dependency(att->second, child);
  }

  // Appended features come last and external parents pre-exist, so no cycle
  // can appear; validate confirms.
  auto violations = validate(out);
  if (!violations.empty())
    throw std::logic_error("add_features produced an invalid model: " +
                           violations.front().rule);
  return out;
}

FeatureModel set_params(const FeatureModel& model,
                        const std::vector<VariantScript::ParamAssignment>& assignments) {
  FeatureModel out = model;
  for (const auto& a : assignments) {
    Feature* f = out.find(a.feature_id);
    if (!f) throw DataError("unknown feature id: \"" + a.feature_id + "\"");
    auto it = f->params.find(a.name);
    if (it == f->params.end())
      throw DataError("unknown parameter \"" + a.name + "\" on feature \"" + a.feature_id +
                      "\"");
    it->second.value = a.value;
  }
  return out;
}

FeatureModel apply_script(const FeatureModel& master, const VariantScript& script,
                          const std::set<std::string>* core_ids, VariantReport* report) {
  VariantReport local;
  VariantReport& rep = report ? *report : local;

  FeatureModel out = suppress(master, script.suppress, &rep.removed);
  if (core_ids) {
    for (const auto& id : rep.removed)
      if (core_ids->count(id)) rep.core_breaks.push_back(id);
  }

  for (const auto& addition : script.add) {
    const std::size_t before = out.features.size();
    out = add_features(out, addition.fragment, addition.attachments);
    for (std::size_t i = before; i < out.features.size(); ++i)
      rep.added_ids.push_back(out.features[i].id);
  }

  out = set_params(out, script.set_params);
  rep.params_changed = static_cast<int>(script.set_params.size());
  return out;
}

VariantScript load_script(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("parse error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw SchemaError("script document must be an object");

  VariantScript script;
  if (auto it = j.find("suppress"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("field $.suppress must be an array");
    for (const auto& id : *it) {
      if (!id.is_string()) throw SchemaError("$.suppress entries must be strings");
      script.suppress.push_back(id.get<std::string>());
    }
  }
  if (auto it = j.find("add"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("field $.add must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& entry = (*it)[i];
      const std::string path = "$.add[" + std::to_string(i) + "]";
      if (!entry.is_object() || !entry.contains("fragment"))
        throw SchemaError(path + " must be an object with a fragment");
      VariantScript::Addition addition;
      addition.fragment =
          model_from_json(entry["fragment"], path + ".fragment", /*allow_external_parents=*/true);
      if (auto att = entry.find("attachments"); att != entry.end() && !att->is_null()) {
        if (!att->is_object()) throw SchemaError(path + ".attachments must be an object");
        for (auto a = att->begin(); a != att->end(); ++a) {
          if (!a.value().is_string())
            throw SchemaError(path + ".attachments values must be strings");
          addition.attachments[a.key()] = a.value().get<std::string>();
        }
      }
      script.add.push_back(std::move(addition));
    }
  }
  if (auto it = j.find("set_params"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("field $.set_params must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& entry = (*it)[i];
      const std::string path = "$.set_params[" + std::to_string(i) + "]";
      if (!entry.is_object() || !entry.contains("feature") || !entry.contains("name") ||
          !entry.contains("value"))
        throw SchemaError(path + " must carry feature, name and value");
      if (!entry["value"].is_number()) throw SchemaError(path + ".value must be a number");
      script.set_params.push_back({entry["feature"].get<std::string>(),
                                   entry["name"].get<std::string>(),
                                   entry["value"].get<double>()});
    }
  }
  return script;
}

VariantScript load_script_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_script(buf.str());
}

}  // namespace snowball
