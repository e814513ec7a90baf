// Copyright 2026 The JPT Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jpt/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jpt/error.hpp"

namespace jpt {

using nlohmann::json;

namespace {

json schema_to_json(const Schema& schema) {
  json out = json::array();
  for (const Variable& var : schema) {
    if (var.is_numeric()) {
      out.push_back({{"name", var.name()}, {"kind", "numeric"}});
    } else {
      out.push_back({{"name", var.name()}, {"kind", "symbolic"}, {"domain", var.domain()}});
    }
  }
  return out;
}

json config_to_json(const LearnerConfig& config) {
  json out = {
      {"min_samples_leaf", {{"value", config.min_samples_leaf.value}, {"fraction", config.min_samples_leaf.fraction}}},
      {"min_impurity_improvement", config.min_impurity_improvement},
      {"epsilon", config.epsilon},
      {"targets", config.targets},
  };
  out["max_depth"] = config.max_depth ? json(*config.max_depth) : json(nullptr);
  return out;
}

json distribution_to_json(const Distribution& distribution) {
  if (const auto* numeric = std::get_if<NumericDistribution>(&distribution)) {
    if (const auto* dirac = numeric->dirac()) return {{"dirac", dirac->value}};
    json hinges = json::array();
    for (const Hinge& h : numeric->plf()->hinges()) hinges.push_back({h.x, h.cdf});
    return {{"hinges", std::move(hinges)}};
  }
  return {{"p", std::get<Multinomial>(distribution).probabilities()}};
}

Schema schema_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("expected an array of variables");
  Schema schema;
  for (const json& entry : j) {
    const std::string name = entry.at("name").get<std::string>();
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "numeric") {
      schema.push_back(Variable::numeric(name));
    } else if (kind == "symbolic") {
      schema.push_back(Variable::symbolic(name, entry.at("domain").get<std::vector<std::string>>()));
    } else {
      throw FormatError("variable '" + name + "' has unknown kind '" + kind + "'");
    }
  }
  return schema;
}

LearnerConfig config_from_json(const json& j) {
  LearnerConfig config;
  const json& msl = j.at("min_samples_leaf");
  config.min_samples_leaf = {msl.at("value").get<double>(), msl.at("fraction").get<bool>()};
  config.min_impurity_improvement = j.at("min_impurity_improvement").get<double>();
  config.epsilon = j.at("epsilon").get<double>();
  config.targets = j.at("targets").get<std::vector<std::string>>();
  if (!j.at("max_depth").is_null()) config.max_depth = j.at("max_depth").get<std::size_t>();
  return config;
}

std::vector<TreeNode> nodes_from_json(const json& j, const Schema& schema) {
  if (!j.is_array()) throw FormatError("expected an array of nodes");
  std::vector<TreeNode> nodes;
  for (const json& entry : j) {
    TreeNode node;
    if (entry.contains("leaf")) {
      node.is_leaf = true;
      node.leaf = entry.at("leaf").get<std::size_t>();
    } else {
      node.is_leaf = false;
      const std::size_t variable = entry.at("variable").get<std::size_t>();
      if (variable >= schema.size()) throw FormatError("split on unknown variable index " + std::to_string(variable));
      if (entry.contains("threshold")) {
        node.split = SplitCriterion::numeric(variable, entry.at("threshold").get<double>());
      } else {
        const std::string label = entry.at("equals").get<std::string>();
        const auto value = schema[variable].index_of(label);
        if (!value) throw FormatError("split value '" + label + "' is not in the domain of '" + schema[variable].name() + "'");
        node.split = SplitCriterion::symbolic(variable, *value);
      }
      node.left = entry.at("left").get<std::size_t>();
      node.right = entry.at("right").get<std::size_t>();
    }
    nodes.push_back(node);
  }
  return nodes;
}

Distribution distribution_from_json(const json& j, const Variable& var) {
  if (var.is_numeric()) {
    if (j.contains("dirac")) return NumericDistribution(DiracDistribution{j.at("dirac").get<double>()});
    std::vector<Hinge> hinges;
    for (const json& h : j.at("hinges")) {
      if (!h.is_array() || h.size() != 2) throw FormatError("hinge must be an [x, F] pair");
      hinges.push_back({h[0].get<double>(), h[1].get<double>()});
    }
    return NumericDistribution(PiecewiseLinearCdf(std::move(hinges)));
  }
  return Multinomial(j.at("p").get<std::vector<double>>());
}

std::vector<Leaf> leaves_from_json(const json& j, const Schema& schema) {
  if (!j.is_array()) throw FormatError("expected an array of leaves");
  std::vector<Leaf> leaves;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& entry = j[k];
    Leaf leaf;
    leaf.prior = entry.at("prior").get<double>();
    leaf.weight = entry.at("weight").get<double>();
    const json& dists = entry.at("distributions");
    if (!dists.is_array() || dists.size() != schema.size()) {
      throw FormatError("leaf " + std::to_string(k) + " does not cover every variable");
    }
    for (std::size_t v = 0; v < schema.size(); ++v) {
      try {
        leaf.distributions.push_back(distribution_from_json(dists[v], schema[v]));
      } catch (const ConfigError& e) {
        throw FormatError("leaf " + std::to_string(k) + ", variable '" + schema[v].name() + "': " + e.what());
      }
    }
    leaves.push_back(std::move(leaf));
  }
  return leaves;
}

// Runs `fn` and prefixes any failure with the section name.
template <typename Fn>
auto in_section(const char* section, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string(section) + ": " + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string(section) + ": " + e.what());
  }
}

std::string escape_label(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string short_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", value);
  return buffer;
}

}  // namespace

std::string model_to_json(const JptModel& model) {
  const Schema& schema = model.schema();
  json nodes = json::array();
  for (const TreeNode& node : model.nodes()) {
    if (node.is_leaf) {
      nodes.push_back({{"leaf", node.leaf}});
      continue;
    }
    json entry = {{"variable", node.split.variable}};
    if (node.split.kind == SplitCriterion::Kind::Threshold) {
      entry["threshold"] = node.split.threshold;
    } else {
      entry["equals"] = schema[node.split.variable].domain()[node.split.value];
    }
    entry["left"] = node.left;
    entry["right"] = node.right;
    nodes.push_back(std::move(entry));
  }
  json leaves = json::array();
  for (const Leaf& leaf : model.leaves()) {
    json dists = json::array();
    for (const Distribution& d : leaf.distributions) dists.push_back(distribution_to_json(d));
    leaves.push_back({{"prior", leaf.prior}, {"weight", leaf.weight}, {"distributions", std::move(dists)}});
  }
  json doc;
  doc["version"] = kModelFormatVersion;
  doc["schema"] = schema_to_json(schema);
  doc["hyperparameters"] = config_to_json(model.config());
  doc["nodes"] = std::move(nodes);
  doc["leaves"] = std::move(leaves);
  return doc.dump(1) + "\n";
}

JptModel model_from_json(std::string_view text) {
  // Track the top-level key being parsed so a truncated document can be
  // reported against its section.
  std::string section = "document";
  json::parser_callback_t track = [&section](int depth, json::parse_event_t event, json& parsed) {
    if (depth == 1 && event == json::parse_event_t::key) section = parsed.get<std::string>();
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), track);
  } catch (const json::parse_error& e) {
    throw FormatError(section + ": model file is truncated or malformed (" + e.what() + ")");
  }
  if (!doc.is_object()) throw FormatError("document: expected a JSON object");

  in_section("version", [&] {
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    return 0;
  });
  Schema schema = in_section("schema", [&] { return schema_from_json(doc.at("schema")); });
  LearnerConfig config = in_section("hyperparameters", [&] { return config_from_json(doc.at("hyperparameters")); });
  std::vector<TreeNode> nodes = in_section("nodes", [&] { return nodes_from_json(doc.at("nodes"), schema); });
  std::vector<Leaf> leaves = in_section("leaves", [&] { return leaves_from_json(doc.at("leaves"), schema); });
  // JptModel reports its own violations with a section prefix.
  return JptModel(std::move(schema), std::move(nodes), std::move(leaves), std::move(config));
}

void save_model(const JptModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(model);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

JptModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

std::string export_dot(const JptModel& model) {
  const Schema& schema = model.schema();
  std::ostringstream out;
  out << "digraph jpt {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\"];\n";
  const auto& nodes = model.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& node = nodes[i];
    if (!node.is_leaf) {
      out << "  n" << i << " [shape=box, label=\"" << escape_label(node.split.describe(schema)) << "\"];\n";
      out << "  n" << i << " -> n" << node.left << " [label=\"true\"];\n";
      out << "  n" << i << " -> n" << node.right << " [label=\"false\"];\n";
      continue;
    }
    const Leaf& leaf = model.leaves()[node.leaf];
    std::string label = "leaf " + std::to_string(node.leaf) + "\\nP = " + short_number(leaf.prior) +
                        "\\nn = " + short_number(leaf.weight);
    for (std::size_t v = 0; v < schema.size(); ++v) {
      label += "\\n" + escape_label(schema[v].name());
      if (schema[v].is_numeric()) {
        label += ": E = " + short_number(leaf.numeric(v).expectation());
      } else {
        const Multinomial& hist = leaf.symbolic(v);
        const std::size_t arg = hist.argmax();
        label += " = " + escape_label(schema[v].domain()[arg]) + " (" + short_number(hist[arg]) + ")";
      }
    }
    out << "  n" << i << " [shape=ellipse, label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace jpt
