#pragma once

// Versioned JSON form of a MamdaniModel.
//
// Object keys are emitted in sorted order and numbers in shortest
// round-trip form, so identical models always serialize to identical bytes.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qoefis/error.hpp"
#include "qoefis/fuzzy.hpp"

namespace qoefis {

inline constexpr std::string_view kModelFormat = "qoefis.mamdani";
inline constexpr int kModelFormatVersion = 1;

[[nodiscard]] inline nlohmann::json to_json(const LinguisticVariable& var) {
  nlohmann::json mfs = nlohmann::json::array();
  for (const auto& mf : var.mfs()) {
    mfs.push_back({{"label", mf.label}, {"left_foot", mf.left_foot}, {"peak", mf.peak}, {"right_foot", mf.right_foot}});
  }
  const auto& u = var.universe();
  return {{"name", var.name()}, {"universe", {{"lo", u.lo}, {"hi", u.hi}, {"grid_step", u.grid_step}}}, {"mfs", mfs}};
}

[[nodiscard]] inline nlohmann::json to_json(const MamdaniModel& model, const nlohmann::json& provenance = nullptr) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& v : model.inputs()) inputs.push_back(to_json(v));
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : model.rules()) {
    nlohmann::json ante = nlohmann::json::object();
    for (const auto& [name, label] : r.antecedents) ante[name] = label;
    rules.push_back({{"antecedents", ante}, {"consequent", r.consequent}, {"degree", r.degree}});
  }
  nlohmann::json doc = {
      {"format", kModelFormat},
      {"version", kModelFormatVersion},
      {"config",
       {{"and", "min"},
        {"implication", "min"},
        {"aggregation", "max"},
        {"defuzzification", "centroid"},
        {"grid_step", model.config().grid_step}}},
      {"inputs", inputs},
      {"output", to_json(model.output())},
      {"rules", rules},
  };
  if (!provenance.is_null()) doc["provenance"] = provenance;
  return doc;
}

[[nodiscard]] inline std::string serialize_model(const MamdaniModel& model, const nlohmann::json& provenance = nullptr) {
  return to_json(model, provenance).dump(2) + "\n";
}

struct LoadedModel {
  MamdaniModel model;
  nlohmann::json provenance;
};

namespace detail {

inline LinguisticVariable variable_from_json(const nlohmann::json& j) {
  const auto& u = j.at("universe");
  Universe universe{u.at("lo").get<double>(), u.at("hi").get<double>(), u.at("grid_step").get<double>()};
  std::vector<TriangularMF> mfs;
  for (const auto& m : j.at("mfs")) {
    mfs.push_back({m.at("label").get<std::string>(), m.at("left_foot").get<double>(), m.at("peak").get<double>(),
                   m.at("right_foot").get<double>()});
  }
  return LinguisticVariable(j.at("name").get<std::string>(), universe, std::move(mfs));
}

inline void expect_operator(const nlohmann::json& config, const char* key, std::string_view value) {
  if (config.at(key).get<std::string>() != value) {
    throw SchemaError(std::string("unsupported ") + key + " operator '" + config.at(key).get<std::string>() + "'");
  }
}

}  // namespace detail

[[nodiscard]] inline LoadedModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) throw SchemaError("not a qoefis model document");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw SchemaError("unsupported model format version " + doc.at("version").dump());
    }
    const auto& config = doc.at("config");
    detail::expect_operator(config, "and", "min");
    detail::expect_operator(config, "implication", "min");
    detail::expect_operator(config, "aggregation", "max");
    detail::expect_operator(config, "defuzzification", "centroid");

    std::vector<LinguisticVariable> inputs;
    for (const auto& v : doc.at("inputs")) inputs.push_back(detail::variable_from_json(v));
    auto output = detail::variable_from_json(doc.at("output"));
    RuleBase rules;
    for (const auto& r : doc.at("rules")) {
      FuzzyRule rule;
      for (const auto& [name, label] : r.at("antecedents").items()) rule.antecedents.emplace(name, label.get<std::string>());
      rule.consequent = r.at("consequent").get<std::string>();
      rule.degree = r.at("degree").get<double>();
      rules.push_back(std::move(rule));
    }
    InferenceConfig cfg{config.at("grid_step").get<double>()};
    nlohmann::json provenance = doc.contains("provenance") ? doc.at("provenance") : nlohmann::json();
    return {MamdaniModel(std::move(inputs), std::move(output), std::move(rules), cfg), std::move(provenance)};
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid model: ") + e.what());
  }
}

[[nodiscard]] inline LoadedModel parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

[[nodiscard]] inline LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace qoefis
