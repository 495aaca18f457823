#pragma once

// End-to-end training: split the survey, partition the inputs, cluster the
// overall ratings into output sets, induce rules and assemble the model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qoefis/dataset.hpp"
#include "qoefis/error.hpp"
#include "qoefis/fcm.hpp"
#include "qoefis/fuzzy.hpp"
#include "qoefis/numfmt.hpp"
#include "qoefis/rule_induction.hpp"

namespace qoefis {

// Output labels for c clusters: the top c labels of the five-point scale,
// so four clusters drop "very_poor". Beyond five, generic level names.
[[nodiscard]] inline std::vector<std::string> default_output_labels(std::size_t clusters) {
  auto scale = default_input_labels();
  if (clusters <= scale.size()) return {scale.end() - static_cast<std::ptrdiff_t>(clusters), scale.end()};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= clusters; ++i) out.push_back("level_" + std::to_string(i));
  return out;
}

struct TrainConfig {
  double train_fraction = 0.6;
  bool stratify = false;  // split within each application code
  std::uint64_t seed = 0;  // drives both the split and FCM initialisation
  FcmConfig fcm;
  std::vector<std::string> input_labels = default_input_labels();
  std::vector<std::string> output_labels;  // empty: default_output_labels(fcm.clusters)
  double grid_step = 0.1;

  [[nodiscard]] std::vector<std::string> resolved_output_labels() const {
    return output_labels.empty() ? default_output_labels(fcm.clusters) : output_labels;
  }

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw InvalidArgument("train fraction must lie in (0, 1]");
    fcm.validate();
    if (fcm.clusters < 2) throw InvalidArgument("the output variable needs at least 2 clusters");
    if (input_labels.size() < 2) throw InvalidArgument("inputs need at least 2 labels");
    if (resolved_output_labels().size() != fcm.clusters) {
      throw InvalidArgument("one output label per cluster is required");
    }
    Universe{0.0, 100.0, grid_step}.validate();
  }
};

struct FittedModel {
  MamdaniModel model;
  FcmResult fcm;
  std::size_t unsupported_records = 0;
};

// Builds a model from already-normalised training records.
[[nodiscard]] inline FittedModel fit_model(std::span<const TrainingRecord> train, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw InvalidArgument("empty training set");
  const Universe universe{0.0, 100.0, config.grid_step};

  std::vector<LinguisticVariable> inputs;
  const auto input_mfs = make_equal_partition(universe, config.input_labels);
  for (auto name : kInputNames) inputs.emplace_back(std::string(name), universe, input_mfs);

  std::vector<double> overall;
  overall.reserve(train.size());
  for (const auto& r : train) overall.push_back(r.overall);
  FcmConfig fcm_config = config.fcm;
  fcm_config.seed = config.seed;
  auto fcm = fcm_cluster(overall, fcm_config);
  LinguisticVariable output(std::string(kOutputName), universe,
                            mfs_from_centers(fcm.centers, universe, config.resolved_output_labels()));

  auto induction = induce(train, inputs, output);
  MamdaniModel model(std::move(inputs), std::move(output), std::move(induction.rules),
                     InferenceConfig{config.grid_step});
  return {std::move(model), std::move(fcm), induction.unsupported_records};
}

struct TrainingOutcome {
  FittedModel fitted;
  DatasetSplit split;
};

[[nodiscard]] inline TrainingOutcome train_model(const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw DataError("empty dataset");
  auto parts = config.stratify ? split_stratified(data, config.train_fraction, config.seed)
                               : split(data, config.train_fraction, config.seed);
  const auto records = to_training(parts.train);
  auto fitted = fit_model(records, config);
  return {std::move(fitted), std::move(parts)};
}

// Training summary embedded in the model document.
[[nodiscard]] inline nlohmann::json training_provenance(const TrainingOutcome& outcome, const TrainConfig& config) {
  nlohmann::json test_ids = nlohmann::json::array();
  for (const auto& row : outcome.split.test.rows) test_ids.push_back(row.participant_id);
  const auto& fcm = outcome.fitted.fcm;
  return {
      {"seed", config.seed},
      {"train_fraction", config.train_fraction},
      {"stratify", config.stratify},
      {"split", {{"train_rows", outcome.split.train.size()}, {"test_rows", outcome.split.test.size()},
                 {"test_participants", test_ids}}},
      {"fcm",
       {{"clusters", config.fcm.clusters},
        {"fuzzifier", config.fcm.fuzzifier},
        {"tolerance", config.fcm.tolerance},
        {"max_iterations", config.fcm.max_iterations},
        {"restarts", config.fcm.restarts},
        {"centers", fcm.centers},
        {"objective_trace", fcm.objective_trace},
        {"iterations", fcm.iterations},
        {"converged", fcm.converged}}},
      {"rule_count", outcome.fitted.model.rules().size()},
      {"unsupported_records", outcome.fitted.unsupported_records},
      {"prng", "mt19937_64"},
  };
}

struct SurfaceCell {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> z;  // empty where no rule fires
};

struct SurfaceGrid {
  std::string var_x;
  std::string var_y;
  Inputs fixed;  // values held for the remaining inputs
  double step = 0.0;
  std::vector<SurfaceCell> cells;  // x-major
};

// Output over a var_x by var_y grid; the other inputs are held at 50
// unless overridden.
[[nodiscard]] inline SurfaceGrid compute_surface(const MamdaniModel& model, std::string_view var_x,
                                                 std::string_view var_y, double step, const Inputs& overrides = {}) {
  if (var_x == var_y) throw InvalidArgument("surface axes must be two different variables");
  const auto& vx = model.input(var_x);
  const auto& vy = model.input(var_y);
  const Universe gx{vx.universe().lo, vx.universe().hi, step};
  const Universe gy{vy.universe().lo, vy.universe().hi, step};
  gx.validate();
  gy.validate();

  SurfaceGrid grid;
  grid.var_x = var_x;
  grid.var_y = var_y;
  grid.step = step;
  for (const auto& [name, value] : overrides) {
    if (name == var_x || name == var_y) throw InvalidArgument("cannot fix a surface axis ('" + name + "')");
    model.input(name).require_in_range(value);
  }
  for (const auto& var : model.inputs()) {
    if (var.name() == var_x || var.name() == var_y) continue;
    const auto it = overrides.find(var.name());
    grid.fixed[var.name()] = it == overrides.end() ? 50.0 : it->second;
  }

  Inputs point = grid.fixed;
  grid.cells.reserve(gx.samples() * gy.samples());
  for (std::size_t i = 0; i < gx.samples(); ++i) {
    for (std::size_t j = 0; j < gy.samples(); ++j) {
      SurfaceCell cell{gx.sample(i), gy.sample(j), std::nullopt};
      point[grid.var_x] = cell.x;
      point[grid.var_y] = cell.y;
      try {
        cell.z = model.infer(point).crisp;
      } catch (const NoRuleCoverage&) {
      }
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

inline constexpr std::string_view kUncoveredToken = "uncovered";

// Long format: header "x,y,z", one row per cell, z in shortest round-trip
// form or the uncovered token.
inline void write_surface_csv(std::ostream& out, const SurfaceGrid& grid) {
  out << "x,y,z\n";
  for (const auto& c : grid.cells) {
    out << format_shortest(c.x) << ',' << format_shortest(c.y) << ','
        << (c.z ? format_shortest(*c.z) : std::string(kUncoveredToken)) << '\n';
  }
}

}  // namespace qoefis
