#include "snowball/model_io.hpp"

#include <fstream>
#include <sstream>

#include "snowball/errors.hpp"

namespace snowball {

using nlohmann::json;


namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << text;
}

const json& require(const json& j, const char* field, const std::string& path) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError("missing field " + path + "." + field);
  return *it;
}

std::string require_string(const json& j, const char* field, const std::string& path) {
  const json& v = require(j, field, path);
  if (!v.is_string()) throw SchemaError("field " + path + "." + field + " must be a string");
  return v.get<std::string>();
}

int require_int(const json& j, const char* field, const std::string& path) {
  const json& v = require(j, field, path);
  if (!v.is_number_integer()) throw SchemaError("field " + path + "." + field + " must be an integer");
  return v.get<int>();
}

Feature feature_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError("feature entry " + path + " must be an object");
  Feature f;
  f.id = require_string(j, "id", path);
  f.type = feature_type_from_token(require_string(j, "type", path), &f.type_tag);
  f.subtype = feature_subtype_from_token(require_string(j, "subtype", path), &f.subtype_tag);

  const json& faces = require(j, "faces", path);
  if (!faces.is_array()) throw SchemaError("field " + path + ".faces must be an array");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string fp = path + ".faces[" + std::to_string(i) + "]";
    const json& fj = faces[i];
    if (!fj.is_object()) throw SchemaError(fp + " must be an object");
    Face face;
    face.id = require_string(fj, "id", fp);
    face.surface = surface_class_from_token(require_string(fj, "surface", fp));
    face.genus = require_int(fj, "genus", fp);
    f.face_graph.faces.push_back(std::move(face));
  }

  const json& adjs = require(j, "adjacencies", path);
  if (!adjs.is_array()) throw SchemaError("field " + path + ".adjacencies must be an array");
  for (std::size_t i = 0; i < adjs.size(); ++i) {
    const std::string ap = path + ".adjacencies[" + std::to_string(i) + "]";
    const json& aj = adjs[i];
    if (!aj.is_object()) throw SchemaError(ap + " must be an object");
    FaceAdjacency adj;
    adj.a = require_string(aj, "a", ap);
    adj.b = require_string(aj, "b", ap);
    adj.convexity = convexity_from_token(require_string(aj, "convexity", ap));
    f.face_graph.adjacencies.push_back(std::move(adj));
  }

  if (auto it = j.find("sketch"); it != j.end() && !it->is_null()) {
    const std::string sp = path + ".sketch";
    if (!it->is_object()) throw SchemaError(sp + " must be an object or null");
    SketchDescriptor s;
    s.topology = sketch_topology_from_token(require_string(*it, "topology", sp));
    s.loop_count = require_int(*it, "loops", sp);
    s.linear_edge_count = require_int(*it, "linear_edges", sp);
    s.curved_edge_count = require_int(*it, "curved_edges", sp);
    f.sketch = s;
  }

  if (auto it = j.find("params"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError("field " + path + ".params must be an object");
    for (auto p = it->begin(); p != it->end(); ++p) {
      const std::string pp = path + ".params." + p.key();
      if (!p.value().is_object()) throw SchemaError(pp + " must be an object");
      Param param;
      const json& v = require(p.value(), "value", pp);
      if (!v.is_number()) throw SchemaError(pp + ".value must be a number");
      param.value = v.get<double>();
      if (auto u = p.value().find("unit"); u != p.value().end() && !u->is_null()) {
        if (!u->is_string()) throw SchemaError(pp + ".unit must be a string");
        param.unit = u->get<std::string>();
      }
      f.params[p.key()] = std::move(param);
    }
  }

  if (auto it = j.find("detail"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) throw SchemaError("field " + path + ".detail must be a boolean");
    f.detail_hint = it->get<bool>();
  }
  return f;
}

json feature_to_json(const Feature& f) {
  json j;
  j["id"] = f.id;
  j["type"] = feature_type_token(f.type, f.type_tag);
  j["subtype"] = feature_subtype_token(f.subtype, f.subtype_tag);
  j["faces"] = json::array();
  for (const auto& face : f.face_graph.faces) {
    json fj;
    fj["id"] = face.id;
    fj["surface"] = surface_class_token(face.surface);
    fj["genus"] = face.genus;
    j["faces"].push_back(std::move(fj));
  }
  j["adjacencies"] = json::array();
  for (const auto& adj : f.face_graph.adjacencies) {
    json aj;
    aj["a"] = adj.a;
    aj["b"] = adj.b;
    aj["convexity"] = convexity_token(adj.convexity);
    j["adjacencies"].push_back(std::move(aj));
  }
  if (f.sketch) {
    json sj;
    sj["topology"] = sketch_topology_token(f.sketch->topology);
    sj["loops"] = f.sketch->loop_count;
    sj["linear_edges"] = f.sketch->linear_edge_count;
    sj["curved_edges"] = f.sketch->curved_edge_count;
    j["sketch"] = std::move(sj);
  }
  if (!f.params.empty()) {
    json pj;
    for (const auto& [name, param] : f.params) {
      json v;
      v["value"] = param.value;
      if (!param.unit.empty()) v["unit"] = param.unit;
      pj[name] = std::move(v);
    }
    j["params"] = std::move(pj);
  }
  if (f.detail_hint) j["detail"] = *f.detail_hint;
  return j;
}

std::string violations_summary(const std::vector<Violation>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size() && i < 5; ++i) {
    if (i) os << "; ";
    os << vs[i].rule;
    if (!vs[i].feature_id.empty()) os << " (" << vs[i].feature_id << ")";
  }
  if (vs.size() > 5) os << "; +" << (vs.size() - 5) << " more";
  return os.str();
}

}  // namespace

FeatureModel model_from_json(const json& j, const std::string& path, bool allow_external_parents) {
  if (!j.is_object()) throw SchemaError("document " + path + " must be an object");
  FeatureModel m;
  if (auto it = j.find("model_id"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("field " + path + ".model_id must be a string");
    m.model_id = it->get<std::string>();
  }
  const json& features = require(j, "features", path);
  if (!features.is_array()) throw SchemaError("field " + path + ".features must be an array");
  for (std::size_t i = 0; i < features.size(); ++i)
    m.features.push_back(
        feature_from_json(features[i], path + ".features[" + std::to_string(i) + "]"));

  if (auto it = j.find("dependencies"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("field " + path + ".dependencies must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string ep = path + ".dependencies[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw SchemaError(ep + " must be a [parent, child] id pair");
      m.add_dependency(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  if (!allow_external_parents) {
    // Endpoint existence is re-checked by validate; nothing extra here.
  }
  return m;
}

json model_to_json(const FeatureModel& model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["model_id"] = model.model_id;
  j["features"] = json::array();
  for (const auto& f : model.features) j["features"].push_back(feature_to_json(f));
  j["dependencies"] = json::array();
  for (const auto& [p, c] : model.dependencies) j["dependencies"].push_back({p, c});
  return j;
}

namespace {

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("parse error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

void check_format_version(const json& j) {
  const json& v = require(j, "format_version", "$");
  if (!v.is_number_integer()) throw SchemaError("field $.format_version must be an integer");
  if (v.get<int>() != kFormatVersion)
    throw SchemaError("unsupported format_version " + v.dump() + ", expected " +
                      std::to_string(kFormatVersion));
}

}  // namespace

FeatureModel load_model(const std::string& text, bool check_valid) {
  json j = parse_document(text);
  check_format_version(j);
  FeatureModel m = model_from_json(j, "$");
  if (check_valid) {
    auto vs = validate(m);
    if (!vs.empty())
      throw DataError("model \"" + m.model_id + "\" fails validation: " + violations_summary(vs));
  }
  return m;
}

FeatureModel load_model_file(const std::filesystem::path& path, bool check_valid) {
  return load_model(read_file(path), check_valid);
}

std::string save_model(const FeatureModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

void save_model_file(const FeatureModel& model, const std::filesystem::path& path) {
  write_file(path, save_model(model));
}

MasterModel load_master(const std::string& text) {
  json j = parse_document(text);
  check_format_version(j);
  MasterModel master;
  master.model = model_from_json(j, "$");
  auto vs = validate(master.model);
  if (!vs.empty())
    throw DataError("master \"" + master.model.model_id +
                    "\" fails validation: " + violations_summary(vs));

  if (auto it = j.find("master"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError("field $.master must be an object");
    master.family_size = require_int(*it, "family_size", "$.master");
    const json& prov = require(*it, "provenance", "$.master");
    if (!prov.is_object()) throw SchemaError("field $.master.provenance must be an object");
    for (auto p = prov.begin(); p != prov.end(); ++p) {
      const std::string pp = "$.master.provenance." + p.key();
      if (!master.model.has_feature(p.key()))
        throw SchemaError("provenance entry " + pp + " names an unknown feature");
      Provenance entry;
      entry.match_count = require_int(p.value(), "match_count", pp);
      const json& sources = require(p.value(), "sources", pp);
      if (!sources.is_array()) throw SchemaError(pp + ".sources must be an array");
      for (const auto& s : sources) {
        if (!s.is_string()) throw SchemaError(pp + ".sources entries must be strings");
        entry.sources.insert(s.get<std::string>());
      }
      master.provenance[p.key()] = std::move(entry);
    }
  } else {
    for (const auto& f : master.model.features)
      master.provenance[f.id] = Provenance{{master.model.model_id}, 0};
  }
  return master;
}

MasterModel load_master_file(const std::filesystem::path& path) {
  return load_master(read_file(path));
}

std::string save_master(const MasterModel& master) {
  json j = model_to_json(master.model);
  json prov;
  for (const auto& [id, p] : master.provenance) {
    json e;
    e["sources"] = json::array();
    for (const auto& s : p.sources) e["sources"].push_back(s);
    e["match_count"] = p.match_count;
    prov[id] = std::move(e);
  }
  j["master"] = json{{"family_size", master.family_size}, {"provenance", std::move(prov)}};
  return j.dump(2) + "\n";
}

void save_master_file(const MasterModel& master, const std::filesystem::path& path) {
  write_file(path, save_master(master));
}

}  // namespace snowball
