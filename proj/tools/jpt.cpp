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

// jpt: train, query, score, sample and export joint probability trees.
//
// Exit codes: 0 success, 1 data or model-file errors, 2 invalid flags,
// 3 evidence with zero probability.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jpt/csv.hpp"
#include "jpt/error.hpp"
#include "jpt/eval.hpp"
#include "jpt/inference.hpp"
#include "jpt/learner.hpp"
#include "jpt/model_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitZeroProbability = 3;

struct TrainOptions {
  std::string data;
  std::string out;
  std::string min_samples_leaf = "1";
  double min_impurity_improvement = 0.0;
  double epsilon = 0.05;
  std::vector<std::string> targets;
  std::string schema;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_depth;
};

struct QueryOptions {
  std::string model;
  std::optional<std::string> query;
  std::string evidence;
  std::optional<std::string> expect;
  double confidence = 0.95;
  bool mpe = false;
  bool posterior = false;
  bool json = false;
};

struct LikelihoodOptions {
  std::string model;
  std::string data;
  bool json = false;
};

struct SampleOptions {
  std::string model;
  std::size_t n = 0;
  std::string evidence;
  std::uint64_t seed = 0;
  std::string out;
};

struct ExportOptions {
  std::string model;
  std::string dot;
};

struct EvalOptions {
  std::string experiment;
  std::string data;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t n = 0;
};

// Evidence strings are flag values, so syntax errors are usage errors.
jpt::Assignment parse_flag_assignment(const std::string& text, const jpt::Schema& schema, const char* flag) {
  try {
    return jpt::parse_assignment(text, schema);
  } catch (const jpt::DataError& e) {
    throw jpt::ConfigError(std::string(flag) + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw jpt::DataError("cannot open '" + path + "' for writing");
  out << text;
}

std::string ll_text(const std::optional<double>& value) {
  return value ? jpt::format_number(*value) : std::string("n/a");
}

int run_train(const TrainOptions& opt) {
  jpt::LearnerConfig config;
  config.min_samples_leaf = jpt::MinSamplesLeaf::parse(opt.min_samples_leaf);
  config.min_impurity_improvement = opt.min_impurity_improvement;
  config.epsilon = opt.epsilon;
  config.targets = opt.targets;
  config.max_depth = opt.max_depth;
  config.validate();

  const jpt::SchemaOverride overrides = opt.schema.empty() ? jpt::SchemaOverride{} : jpt::load_schema_override(opt.schema);
  const jpt::Dataset data = jpt::ingest_csv(opt.data, overrides);
  const jpt::JptModel model = jpt::learn(data, config);
  jpt::save_model(model, opt.out);

  const jpt::LikelihoodReport ll = jpt::log_likelihood(model, data);
  std::cout << "leaves: " << model.leaves().size() << "\n"
            << "parameters: " << model.parameter_count() << "\n"
            << "train log-likelihood: " << ll_text(ll.average) << "\n"
            << "zero-likelihood rows: " << ll.zero_rows << " of " << ll.rows << "\n";
  return 0;
}

json posterior_json(const jpt::Distribution& distribution, const jpt::Variable& var) {
  if (const auto* numeric = std::get_if<jpt::NumericDistribution>(&distribution)) {
    if (const auto* dirac = numeric->dirac()) return {{"type", "dirac"}, {"value", dirac->value}};
    json hinges = json::array();
    for (const jpt::Hinge& h : numeric->hinges()) hinges.push_back({h.x, h.cdf});
    return {{"type", "plf"}, {"expectation", numeric->expectation()}, {"hinges", std::move(hinges)}};
  }
  const auto& hist = std::get<jpt::Multinomial>(distribution);
  json p = json::object();
  for (std::size_t v = 0; v < hist.size(); ++v) p[var.domain()[v]] = hist[v];
  return {{"type", "symbolic"}, {"p", std::move(p)}};
}

int run_query(const QueryOptions& opt) {
  const int modes = (opt.query ? 1 : 0) + (opt.expect ? 1 : 0) + (opt.mpe ? 1 : 0) + (opt.posterior ? 1 : 0);
  if (modes != 1) throw jpt::ConfigError("query needs exactly one of --q, --expect, --mpe, --posterior");

  const jpt::JptModel model = jpt::load_model(opt.model);
  const jpt::Schema& schema = model.schema();
  const jpt::Assignment evidence = parse_flag_assignment(opt.evidence, schema, "--e");
  const std::string evidence_text = jpt::format_assignment(evidence, schema);

  if (opt.query) {
    const jpt::Assignment query = parse_flag_assignment(*opt.query, schema, "--q");
    const double p = jpt::event_probability(model, query, evidence);
    if (opt.json) {
      std::cout << json{{"query", jpt::format_assignment(query, schema)}, {"evidence", evidence_text}, {"probability", p}}.dump()
                << "\n";
    } else {
      std::cout << "P(" << jpt::format_assignment(query, schema) << (evidence.empty() ? "" : " | " + evidence_text)
                << ") = " << jpt::format_number(p) << "\n";
    }
    return 0;
  }

  if (opt.expect) {
    const auto target = jpt::find_variable(schema, *opt.expect);
    if (!target) throw jpt::ConfigError("--expect: unknown variable '" + *opt.expect + "'");
    const jpt::ExpectationResult r = jpt::expectation_query(model, *target, evidence, opt.confidence);
    if (opt.json) {
      std::cout << json{{"target", *opt.expect}, {"evidence", evidence_text}, {"confidence", opt.confidence},
                        {"mean", r.mean},        {"lower", r.lower},          {"upper", r.upper}}
                       .dump()
                << "\n";
    } else {
      std::cout << "E(" << *opt.expect << (evidence.empty() ? "" : " | " + evidence_text)
                << ") = " << jpt::format_number(r.mean) << "\n"
                << jpt::format_number(opt.confidence) << " interval: [" << jpt::format_number(r.lower) << ", "
                << jpt::format_number(r.upper) << "]\n";
    }
    return 0;
  }

  if (opt.mpe) {
    const jpt::MpeResult r = jpt::mpe(model, evidence);
    json world = json::object();
    for (std::size_t v = 0; v < schema.size(); ++v) {
      if (schema[v].is_numeric()) {
        world[schema[v].name()] = r.world[v];
      } else {
        world[schema[v].name()] = schema[v].domain()[static_cast<std::size_t>(r.world[v])];
      }
    }
    const char* note = "score mixes probability mass and density; compare only under the same evidence";
    if (opt.json) {
      std::cout << json{{"evidence", evidence_text}, {"world", world}, {"score", r.score}, {"leaf", r.leaf},
                        {"score_note", note}}
                       .dump()
                << "\n";
    } else {
      for (std::size_t v = 0; v < schema.size(); ++v) {
        std::cout << schema[v].name() << " = "
                  << (schema[v].is_numeric() ? jpt::format_number(r.world[v])
                                             : world[schema[v].name()].get<std::string>())
                  << "\n";
      }
      std::cout << "leaf: " << r.leaf << "\nscore: " << jpt::format_number(r.score) << " (" << note << ")\n";
    }
    return 0;
  }

  const auto posteriors = jpt::posterior_distributions(model, evidence);
  json variables = json::object();
  for (std::size_t v = 0; v < schema.size(); ++v) variables[schema[v].name()] = posterior_json(posteriors[v], schema[v]);
  std::cout << json{{"evidence", evidence_text}, {"variables", std::move(variables)}}.dump(opt.json ? -1 : 2) << "\n";
  return 0;
}

int run_likelihood(const LikelihoodOptions& opt) {
  const jpt::JptModel model = jpt::load_model(opt.model);
  const jpt::Dataset data = jpt::ingest_csv_with_schema(opt.data, model.schema());
  const jpt::LikelihoodReport r = jpt::log_likelihood(model, data);
  if (opt.json) {
    std::cout << json{{"rows", r.rows},
                      {"zero_rows", r.zero_rows},
                      {"zero_fraction", r.zero_fraction},
                      {"average_log_likelihood", r.average ? json(*r.average) : json(nullptr)}}
                     .dump()
              << "\n";
  } else {
    std::cout << "average log-likelihood: " << ll_text(r.average) << "\n"
              << "zero-likelihood fraction: " << jpt::format_number(r.zero_fraction) << " (" << r.zero_rows << " of "
              << r.rows << ")\n";
  }
  return 0;
}

int run_sample(const SampleOptions& opt) {
  if (opt.n == 0) throw jpt::ConfigError("-n must be at least 1");
  const jpt::JptModel model = jpt::load_model(opt.model);
  const jpt::Assignment evidence = parse_flag_assignment(opt.evidence, model.schema(), "--e");
  jpt::RandomStream rng(opt.seed);
  const jpt::Dataset samples = jpt::sample(model, opt.n, rng, evidence);
  std::ostringstream out;
  jpt::write_csv(out, samples);
  write_text(opt.out, out.str());
  return 0;
}

int run_export(const ExportOptions& opt) {
  write_text(opt.dot, jpt::export_dot(jpt::load_model(opt.model)));
  return 0;
}

int run_eval(const EvalOptions& opt) {
  std::string report;
  if (opt.experiment == "toy") {
    report = jpt::to_json(jpt::run_toy_experiment(opt.n == 0 ? 1000 : opt.n, opt.seed));
  } else if (opt.experiment == "regression") {
    jpt::RegressionConfig config;
    config.seed = opt.seed;
    if (opt.n != 0) config.n = opt.n;
    report = jpt::to_json(jpt::run_regression_experiment(config));
  } else if (opt.experiment == "uci") {
    if (opt.data.empty()) throw jpt::ConfigError("--experiment uci needs --data");
    jpt::SweepConfig config;
    config.seed = opt.seed;
    report = jpt::to_json(jpt::run_likelihood_sweep(jpt::ingest_csv(opt.data), config));
  } else if (opt.experiment == "mixture") {
    jpt::MixtureConfig config;
    config.seed = opt.seed;
    if (opt.n != 0) config.train_size = config.test_size = opt.n;
    report = jpt::to_json(jpt::run_mixture_experiment(config));
  } else {
    throw jpt::ConfigError("unknown experiment '" + opt.experiment + "'");
  }
  write_text(opt.out, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint probability trees: learn hybrid joint distributions and query them exactly"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Learn a model from a CSV file");
  train_cmd->add_option("--data", train.data, "Training CSV with a header row")->required();
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--min-samples-leaf", train.min_samples_leaf,
                        "Minimum leaf size: a fraction in (0, 1] or a positive count")
      ->capture_default_str();
  train_cmd->add_option("--min-impurity-improvement", train.min_impurity_improvement,
                        "Stop splitting below this improvement")
      ->capture_default_str();
  train_cmd->add_option("--epsilon", train.epsilon, "CDF fitting tolerance (summed squared quantile residuals)")->capture_default_str();
  train_cmd->add_option("--targets", train.targets, "Comma-separated target variables (discriminative learning)")
      ->delimiter(',');
  train_cmd->add_option("--schema", train.schema, "JSON map of column name to numeric|symbolic");
  train_cmd->add_option("--seed", train.seed, "Accepted for scripting symmetry; training is deterministic");
  train_cmd->add_option("--max-depth", train.max_depth, "Maximum tree depth");

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Posterior probability, expectation, MPE or posteriors");
  query_cmd->add_option("--model", query.model, "Model file")->required();
  query_cmd->add_option("--q", query.query, "Query assignment, e.g. \"color = Red; x in [0, 1]\"");
  query_cmd->add_option("--e", query.evidence, "Evidence assignment");
  query_cmd->add_option("--expect", query.expect, "Numeric variable whose expectation to report");
  query_cmd->add_option("--confidence", query.confidence, "Confidence level for --expect")->capture_default_str();
  query_cmd->add_flag("--mpe", query.mpe, "Most probable explanation");
  query_cmd->add_flag("--posterior", query.posterior, "Posterior distribution of every variable");
  query_cmd->add_flag("--json", query.json, "Machine-readable output");

  LikelihoodOptions likelihood;
  auto* likelihood_cmd = app.add_subcommand("likelihood", "Average log-likelihood of a CSV file");
  likelihood_cmd->add_option("--model", likelihood.model, "Model file")->required();
  likelihood_cmd->add_option("--data", likelihood.data, "CSV file with the model's columns")->required();
  likelihood_cmd->add_flag("--json", likelihood.json, "Machine-readable output");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw rows from the model as CSV");
  sample_cmd->add_option("--model", sample.model, "Model file")->required();
  sample_cmd->add_option("-n", sample.n, "Number of rows")->required();
  sample_cmd->add_option("--e", sample.evidence, "Evidence assignment");
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Output CSV (default: standard output)");

  ExportOptions exporter;
  auto* export_cmd = app.add_subcommand("export", "Write the tree as a Graphviz digraph");
  export_cmd->add_option("--model", exporter.model, "Model file")->required();
  export_cmd->add_option("--dot", exporter.dot, "Output DOT file ('-' for standard output)")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Run a built-in experiment and write a JSON report");
  eval_cmd->add_option("--experiment", eval.experiment, "toy | regression | uci | mixture")
      ->required()
      ->check(CLI::IsMember({"toy", "regression", "uci", "mixture"}));
  eval_cmd->add_option("--data", eval.data, "Dataset for the uci experiment");
  eval_cmd->add_option("--seed", eval.seed, "Random seed")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Report file (default: standard output)");
  eval_cmd->add_option("-n", eval.n, "Sample size override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*query_cmd) return run_query(query);
    if (*likelihood_cmd) return run_likelihood(likelihood);
    if (*sample_cmd) return run_sample(sample);
    if (*export_cmd) return run_export(exporter);
    if (*eval_cmd) return run_eval(eval);
  } catch (const jpt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const jpt::ZeroProbabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitZeroProbability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
