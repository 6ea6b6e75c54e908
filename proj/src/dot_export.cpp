#include "snowball/dot_export.hpp"

#include <sstream>

#include "snowball/signatures.hpp"

namespace snowball {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string render(const FeatureModel& model, const DotOptions& options,
                   const std::set<std::string>* core) {
  std::map<std::string, int> codes;
  if (options.include_codes) codes = hierarchical_match(model, model).codes.a;

  std::ostringstream os;
  os << "digraph \"" << escape(model.model_id) << "\" {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& f : model.features) {
    std::string label = escape(f.id) + "\\n" + escape(feature_type_token(f.type, f.type_tag));
    if (f.subtype != FeatureSubtype::None)
      label += "/" + escape(feature_subtype_token(f.subtype, f.subtype_tag));
    if (options.include_codes) label += "\\ncode=" + std::to_string(codes.at(f.id));
    os << "  \"" << escape(f.id) << "\" [label=\"" << label << "\"";
    if (core && core->count(f.id))
      os << ", style=filled, fillcolor=lightsteelblue, penwidth=2";
    os << "];\n";
  }
  for (const auto& [p, c] : model.dependencies)
    os << "  \"" << escape(p) << "\" -> \"" << escape(c) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace

std::string export_dot(const FeatureModel& model, const DotOptions& options) {
  return render(model, options, nullptr);
}

std::string export_dot(const MasterModel& master, const DotOptions& options) {
  const std::set<std::string> core = master.core_ids();
  return render(master.model, options, &core);
}

}  // namespace snowball
