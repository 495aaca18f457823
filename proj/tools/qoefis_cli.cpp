// qoefis: train, run and validate a Mamdani QoE model from survey CSVs.
//
// Exit codes: 0 success, 1 internal error, 2 usage or argument range,
// 3 data or schema error, 4 no rule covers the requested inputs.

#include <charconv>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qoefis/qoefis.hpp"

namespace {

using namespace qoefis;

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kData = 3, kNoCoverage = 4 };

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw DataError("failed writing '" + path + "'");
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw InvalidArgument(what + ": '" + text + "' is not a number");
  }
  return v;
}

Inputs parse_fixes(const std::vector<std::string>& fixes) {
  Inputs out;
  for (const auto& f : fixes) {
    const auto eq = f.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("--fix expects VAR=VALUE, got '" + f + "'");
    const auto name = f.substr(0, eq);
    if (!out.emplace(name, parse_number(f.substr(eq + 1), "--fix " + name)).second) {
      throw InvalidArgument("--fix given twice for '" + name + "'");
    }
  }
  return out;
}

std::string rule_text(const FuzzyRule& r, const MamdaniModel& m) {
  std::string s = "IF";
  bool first = true;
  for (const auto& var : m.inputs()) {
    s += first ? " " : " AND ";
    s += var.name() + " is " + r.antecedents.at(var.name());
    first = false;
  }
  return s + " THEN " + m.output().name() + " is " + r.consequent;
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::uint64_t seed = 0;
  double train_fraction = 0.6;
  std::size_t clusters = 4;
  double fuzzifier = 2.0;
  double step = 0.1;
  std::size_t restarts = FcmConfig{}.restarts;
  bool stratify = false;
};

int run_train(const TrainArgs& a) {
  TrainConfig cfg;
  cfg.seed = a.seed;
  cfg.train_fraction = a.train_fraction;
  cfg.stratify = a.stratify;
  cfg.fcm.clusters = a.clusters;
  cfg.fcm.fuzzifier = a.fuzzifier;
  cfg.fcm.restarts = a.restarts;
  cfg.grid_step = a.step;
  cfg.validate();

  const auto data = load_survey_csv(a.data);
  const auto outcome = train_model(data, cfg);
  write_file(a.out, serialize_model(outcome.fitted.model, training_provenance(outcome, cfg)));

  const auto& fcm = outcome.fitted.fcm;
  std::cout << "model: " << a.out << '\n'
            << "split: " << outcome.split.train.size() << " train / " << outcome.split.test.size()
            << " test (seed " << a.seed << (a.stratify ? ", stratified" : "") << ")\n"
            << "fcm: " << fcm.centers.size() << " clusters, " << fcm.iterations << " iterations, "
            << (fcm.converged ? "converged" : "not converged") << '\n'
            << "fcm centers:";
  for (double c : fcm.centers) std::cout << ' ' << format_fixed(c, 3);
  std::cout << "\nfcm objective trace:";
  for (double j : fcm.objective_trace) std::cout << ' ' << format_fixed(j, 4);
  std::cout << "\nrules: " << outcome.fitted.model.rules().size() << '\n';
  if (outcome.fitted.unsupported_records > 0) {
    std::cout << "records without output support: " << outcome.fitted.unsupported_records << '\n';
  }
  return kOk;
}

struct InferArgs {
  std::string model;
  std::vector<double> scores;
  bool diagnostics = false;
  bool json = false;
};

int run_infer(const InferArgs& a) {
  const auto loaded = load_model_file(a.model);
  const auto& m = loaded.model;
  if (a.scores.size() != m.inputs().size()) {
    throw InvalidArgument("expected " + std::to_string(m.inputs().size()) + " scores");
  }
  Inputs in;
  for (std::size_t i = 0; i < a.scores.size(); ++i) in[m.inputs()[i].name()] = a.scores[i];
  const auto r = m.infer(in);
  if (a.json) {
    nlohmann::json out = {{m.output().name(), r.crisp}};
    if (a.diagnostics) {
      nlohmann::json fired = nlohmann::json::array();
      for (std::size_t k = 0; k < r.firing.size(); ++k) {
        if (r.firing[k] > 0.0) fired.push_back({{"rule", k}, {"firing", r.firing[k]}});
      }
      out["fired"] = fired;
    }
    std::cout << out.dump() << '\n';
    return kOk;
  }
  std::cout << format_fixed(r.crisp, 3) << '\n';
  if (a.diagnostics) {
    for (std::size_t k = 0; k < r.firing.size(); ++k) {
      if (r.firing[k] <= 0.0) continue;
      std::cout << "rule " << k << " firing " << format_fixed(r.firing[k], 4) << ": " << rule_text(m.rules()[k], m)
                << '\n';
    }
  }
  return kOk;
}

struct EvaluateArgs {
  std::string model;
  std::string data;
  bool held_out = false;
  double alpha = 0.05;
  std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto loaded = load_model_file(a.model);
  auto data = load_survey_csv(a.data);
  if (a.held_out) {
    const auto& prov = loaded.provenance;
    if (!prov.is_object() || !prov.contains("split")) throw DataError("model carries no held-out split");
    std::set<std::string> ids;
    for (const auto& id : prov.at("split").at("test_participants")) ids.insert(id.get<std::string>());
    Dataset test;
    test.provenance.source = data.provenance.source + " [held-out]";
    for (const auto& row : data.rows) {
      if (ids.erase(row.participant_id)) test.rows.push_back(row);
    }
    if (!ids.empty()) {
      throw DataError("held-out participant '" + *ids.begin() + "' is missing from " + a.data);
    }
    test.provenance.row_count = test.rows.size();
    data = std::move(test);
  }
  const auto records = to_training(data);
  const auto report = to_json(evaluate(loaded.model, records, a.alpha));
  const auto text = render_report_text(report);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out + ".txt", text);
    write_file(a.out + ".json", report.dump(2) + "\n");
    std::cout << "report: " << a.out << ".txt, " << a.out << ".json\n";
  }
  return kOk;
}

struct SurfaceArgs {
  std::string model;
  std::string x = "content_quality";
  std::string y = "environment_understanding";
  double step = 5.0;
  std::vector<std::string> fix;
  std::string out;
};

int run_surface(const SurfaceArgs& a) {
  const auto loaded = load_model_file(a.model);
  const auto grid = compute_surface(loaded.model, a.x, a.y, a.step, parse_fixes(a.fix));
  if (a.out.empty()) {
    write_surface_csv(std::cout, grid);
    return kOk;
  }
  std::ostringstream csv;
  write_surface_csv(csv, grid);
  write_file(a.out, csv.str());
  return kOk;
}

struct GenerateArgs {
  SyntheticConfig config;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  const auto ds = generate_synthetic_survey(a.config);
  std::ostringstream csv;
  write_survey_csv(csv, ds);
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(a.out, csv.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mamdani fuzzy QoE model toolkit"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "fit a model on a survey CSV");
  train_cmd->add_option("--data", train.data, "survey CSV")->required();
  train_cmd->add_option("--out", train.out, "model JSON to write")->required();
  train_cmd->add_option("--seed", train.seed, "seed for the split and FCM initialisation");
  train_cmd->add_option("--train-fraction", train.train_fraction, "share of rows used for training");
  train_cmd->add_option("--clusters", train.clusters, "output clusters / labels");
  train_cmd->add_option("--fuzzifier", train.fuzzifier, "FCM fuzzifier m");
  train_cmd->add_option("--step", train.step, "defuzzification grid step");
  train_cmd->add_option("--restarts", train.restarts, "FCM initialisations");
  train_cmd->add_flag("--stratify", train.stratify, "split within each application");

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "evaluate the model at one input point");
  infer_cmd->add_option("--model", infer.model, "model JSON")->required();
  infer_cmd->add_option("scores", infer.scores, "content hardware environment interaction scores (0-100)")
      ->required()
      ->expected(4);
  infer_cmd->add_flag("--diagnostics", infer.diagnostics, "list the rules that fire");
  infer_cmd->add_flag("--json", infer.json, "print JSON with full precision");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "compare model estimates with user ratings");
  eval_cmd->add_option("--model", eval.model, "model JSON")->required();
  eval_cmd->add_option("--data", eval.data, "survey CSV")->required();
  eval_cmd->add_flag("--held-out", eval.held_out, "use only the rows the model held out at training");
  eval_cmd->add_option("--alpha", eval.alpha, "significance level");
  eval_cmd->add_option("--out", eval.out, "write PREFIX.txt and PREFIX.json instead of printing");

  SurfaceArgs surface;
  auto* surface_cmd = app.add_subcommand("surface", "tabulate the output over two inputs");
  surface_cmd->add_option("--model", surface.model, "model JSON")->required();
  surface_cmd->add_option("--x", surface.x, "first axis input");
  surface_cmd->add_option("--y", surface.y, "second axis input");
  surface_cmd->add_option("--step", surface.step, "grid step; must divide the input range");
  surface_cmd->add_option("--fix", surface.fix, "hold an input at a value (VAR=VALUE), repeatable");
  surface_cmd->add_option("--out", surface.out, "CSV to write instead of printing");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic survey CSV");
  gen_cmd->add_option("--rows", gen.config.rows, "participants");
  gen_cmd->add_option("--seed", gen.config.seed, "generator seed");
  gen_cmd->add_option("--noise-sd", gen.config.noise_sd, "SD of the rating noise");
  gen_cmd->add_option("--out", gen.out, "CSV to write instead of printing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*infer_cmd) return run_infer(infer);
    if (*eval_cmd) return run_evaluate(eval);
    if (*surface_cmd) return run_surface(surface);
    if (*gen_cmd) return run_generate(gen);
  } catch (const NoRuleCoverage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoCoverage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
