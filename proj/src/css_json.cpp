#include "qldpc/css_json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qldpc/alist.hpp"

namespace qldpc {

namespace {

using nlohmann::json;

std::size_t require_count(const json& node, const char* context,
                          const char* field) {
  if (!node.contains(field)) {
    throw std::runtime_error(std::string("css descriptor: ") + context +
                             " is missing \"" + field + "\"");
  }
  const json& value = node.at(field);
  if (!value.is_number_unsigned()) {
    throw std::runtime_error(std::string("css descriptor: ") + context +
                             " field \"" + field +
                             "\" must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

std::vector<BbTerm> parse_terms(const json& node, const char* field) {
  if (!node.contains(field) || !node.at(field).is_array()) {
    throw std::runtime_error(std::string("css descriptor: bb construction "
                                         "needs an array \"") +
                             field + "\"");
  }
  std::vector<BbTerm> terms;
  for (const json& entry : node.at(field)) {
    if (!entry.is_array() || entry.size() != 2 ||
        !entry[0].is_number_unsigned() || !entry[1].is_number_unsigned()) {
      throw std::runtime_error(std::string("css descriptor: each entry of \"") +
                               field +
                               "\" must be a two-element [x_exp, y_exp] pair");
    }
    terms.push_back({entry[0].get<std::uint32_t>(),
                     entry[1].get<std::uint32_t>()});
  }
  return terms;
}

// A value with a newline is an inline alist payload; otherwise a file path,
// resolved against base_dir when relative.
SparseGf2Matrix load_alist_ref(const std::string& value,
                               const std::string& base_dir) {
  if (value.find('\n') != std::string::npos) {
    return load_alist(value);
  }
  std::filesystem::path path(value);
  if (path.is_relative() && !base_dir.empty()) {
    path = std::filesystem::path(base_dir) / path;
  }
  return load_alist_file(path.string());
}

json terms_to_json(const std::vector<BbTerm>& terms) {
  json out = json::array();
  for (const BbTerm& t : terms) out.push_back({t.x_exp, t.y_exp});
  return out;
}

json params_to_json(const CodeParams& p) {
  json out{{"n", p.n}, {"k", p.k}};
  if (p.d != 0) out["d"] = p.d;
  return out;
}

std::string finish(json doc) { return doc.dump(2) + "\n"; }

}  // namespace

CssCode load_css_json(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("css descriptor: invalid JSON: ") +
                             e.what());
  }
  if (!doc.is_object() || !doc.contains("name") ||
      !doc.at("name").is_string()) {
    throw std::runtime_error(
        "css descriptor: top level must be an object with a string \"name\"");
  }
  const std::string name = doc.at("name").get<std::string>();
  if (!doc.contains("params") || !doc.at("params").is_object()) {
    throw std::runtime_error("css descriptor: missing \"params\" object");
  }
  const json& params = doc.at("params");
  const std::size_t declared_n = require_count(params, "params", "n");
  const std::size_t declared_k = require_count(params, "params", "k");
  const std::size_t declared_d =
      params.contains("d") ? require_count(params, "params", "d") : 0;

  if (!doc.contains("construction") || !doc.at("construction").is_object()) {
    throw std::runtime_error("css descriptor: missing \"construction\" object");
  }
  const json& construction = doc.at("construction");
  const bool has_bb = construction.contains("bb");
  const bool has_alist =
      construction.contains("alist_x") || construction.contains("alist_z");
  if (has_bb == has_alist) {
    throw std::runtime_error(
        "css descriptor: construction must contain either \"bb\" or the "
        "\"alist_x\"/\"alist_z\" pair, not both or neither");
  }

  CssCode code = [&] {
    if (has_bb) {
      const json& bb = construction.at("bb");
      if (!bb.is_object()) {
        throw std::runtime_error("css descriptor: \"bb\" must be an object");
      }
      BbCodeSpec spec;
      spec.l = require_count(bb, "bb construction", "l");
      spec.m = require_count(bb, "bb construction", "m");
      spec.a_terms = parse_terms(bb, "a_terms");
      spec.b_terms = parse_terms(bb, "b_terms");
      return build_bb_code(spec, name, declared_d);
    }
    if (!construction.contains("alist_x") ||
        !construction.contains("alist_z") ||
        !construction.at("alist_x").is_string() ||
        !construction.at("alist_z").is_string()) {
      throw std::runtime_error(
          "css descriptor: construction needs string fields \"alist_x\" and "
          "\"alist_z\"");
    }
    SparseGf2Matrix hx =
        load_alist_ref(construction.at("alist_x").get<std::string>(), base_dir);
    SparseGf2Matrix hz =
        load_alist_ref(construction.at("alist_z").get<std::string>(), base_dir);
    return CssCode(name, std::move(hx), std::move(hz), declared_d);
  }();

  if (code.params().n != declared_n) {
    throw std::runtime_error(
        "css descriptor '" + name + "': declared n=" +
        std::to_string(declared_n) + " but the construction has n=" +
        std::to_string(code.params().n));
  }
  if (code.params().k != declared_k) {
    throw std::runtime_error(
        "css descriptor '" + name + "': declared k=" +
        std::to_string(declared_k) + " but rank computation gives k=" +
        std::to_string(code.params().k));
  }
  return code;
}

CssCode load_css_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open css descriptor: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_css_json(text.str(),
                       std::filesystem::path(path).parent_path().string());
}

std::string save_css_json(const CssCode& code) {
  json doc{{"name", code.name()},
           {"params", params_to_json(code.params())},
           {"construction",
            {{"alist_x", save_alist(code.hx())},
             {"alist_z", save_alist(code.hz())}}}};
  return finish(std::move(doc));
}

std::string save_css_json(const CssCode& code, const std::string& alist_x_path,
                          const std::string& alist_z_path) {
  json doc{{"name", code.name()},
           {"params", params_to_json(code.params())},
           {"construction",
            {{"alist_x", alist_x_path}, {"alist_z", alist_z_path}}}};
  return finish(std::move(doc));
}

std::string save_css_json(const CssCode& code, const BbCodeSpec& spec) {
  json doc{{"name", code.name()},
           {"params", params_to_json(code.params())},
           {"construction",
            {{"bb",
              {{"l", spec.l},
               {"m", spec.m},
               {"a_terms", terms_to_json(spec.a_terms)},
               {"b_terms", terms_to_json(spec.b_terms)}}}}}};
  return finish(std::move(doc));
}

}  // namespace qldpc
