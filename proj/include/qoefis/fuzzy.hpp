#pragma once

// Mamdani fuzzy inference over triangular membership functions.
//
// The engine is fixed to the classic Mamdani configuration: min for AND,
// min (clipping) for implication, max for aggregation and a discrete
// centroid over a uniform output grid for defuzzification.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qoefis/error.hpp"

namespace qoefis {

// The four high-level QoE parameters used as model inputs, in questionnaire
// order (G1..G4), and the name of the output variable.
inline constexpr std::array<std::string_view, 4> kInputNames{
    "content_quality", "hardware_quality", "environment_understanding", "user_interaction"};
inline constexpr std::string_view kOutputName = "overall_rating";

inline std::vector<std::string> default_input_labels() {
  return {"very_poor", "poor", "fair", "good", "excellent"};
}

// Crisp input values keyed by variable name.
using Inputs = std::map<std::string, double, std::less<>>;

struct Universe {
  double lo = 0.0;
  double hi = 100.0;
  double grid_step = 0.1;

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidArgument("universe requires finite lo < hi");
    }
    if (!std::isfinite(grid_step) || !(grid_step > 0.0)) {
      throw InvalidArgument("universe grid_step must be positive");
    }
    const double ratio = (hi - lo) / grid_step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || ratio < 0.5) {
      throw InvalidArgument("universe width must be an integer multiple of grid_step");
    }
  }

  // Number of grid intervals; the grid has intervals() + 1 samples.
  [[nodiscard]] std::size_t intervals() const {
    return static_cast<std::size_t>(std::llround((hi - lo) / grid_step));
  }
  [[nodiscard]] std::size_t samples() const { return intervals() + 1; }

  // Computed from the index rather than accumulated, so integer-valued grid
  // points come out exact.
  [[nodiscard]] double sample(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals());
  }

  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Universe&, const Universe&) = default;
};

struct TriangularMF {
  std::string label;
  double left_foot = 0.0;
  double peak = 0.0;
  double right_foot = 0.0;

  // 1 at the peak, 0 at or beyond the feet, linear in between. A foot that
  // coincides with the peak gives a vertical edge (shoulder at a bound).
  [[nodiscard]] double operator()(double x) const noexcept {
    if (!std::isfinite(x)) return 0.0;
    if (x == peak) return 1.0;
    if (x <= left_foot || x >= right_foot) return 0.0;
    if (x < peak) return (x - left_foot) / (peak - left_foot);
    return (right_foot - x) / (right_foot - peak);
  }

  void validate(const Universe& universe) const {
    if (label.empty()) throw InvalidArgument("membership function label is empty");
    if (!(left_foot <= peak && peak <= right_foot && left_foot < right_foot)) {
      throw InvalidArgument("membership function '" + label +
                            "' requires left_foot <= peak <= right_foot and left_foot < right_foot");
    }
    if (left_foot < universe.lo || right_foot > universe.hi) {
      throw InvalidArgument("membership function '" + label + "' leaves its universe");
    }
  }

  friend bool operator==(const TriangularMF&, const TriangularMF&) = default;
};

[[nodiscard]] inline double mf_membership(const TriangularMF& mf, double x) noexcept { return mf(x); }

// Equally spaced triangles whose feet sit on the neighbouring peaks; the
// outermost feet are clamped to the universe bounds. Memberships sum to 1
// everywhere on [lo, hi].
[[nodiscard]] inline std::vector<TriangularMF> make_equal_partition(const Universe& universe,
                                                                    std::span<const std::string> labels) {
  universe.validate();
  if (labels.size() < 2) throw InvalidArgument("an equal partition needs at least 2 labels");
  const std::size_t n = labels.size();
  std::vector<double> peaks(n);
  for (std::size_t k = 0; k < n; ++k) {
    peaks[k] = universe.lo + (universe.hi - universe.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  std::vector<TriangularMF> mfs;
  mfs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    mfs.push_back({labels[k], k == 0 ? universe.lo : peaks[k - 1], peaks[k],
                   k + 1 == n ? universe.hi : peaks[k + 1]});
  }
  return mfs;
}

class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Universe universe, std::vector<TriangularMF> mfs)
      : name_(std::move(name)), universe_(universe), mfs_(std::move(mfs)) {
    if (name_.empty()) throw InvalidArgument("variable name is empty");
    universe_.validate();
    if (mfs_.size() < 2) throw InvalidArgument("variable '" + name_ + "' needs at least 2 membership functions");
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < mfs_.size(); ++i) {
      mfs_[i].validate(universe_);
      if (!seen.insert(mfs_[i].label).second) {
        throw InvalidArgument("variable '" + name_ + "' has duplicate label '" + mfs_[i].label + "'");
      }
      if (i > 0 && !(mfs_[i - 1].peak < mfs_[i].peak)) {
        throw InvalidArgument("variable '" + name_ + "' peaks must be strictly increasing");
      }
    }
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const Universe& universe() const { return universe_; }
  [[nodiscard]] const std::vector<TriangularMF>& mfs() const { return mfs_; }
  [[nodiscard]] std::size_t size() const { return mfs_.size(); }

  [[nodiscard]] std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < mfs_.size(); ++i) {
      if (mfs_[i].label == label) return i;
    }
    return std::nullopt;
  }

  [[nodiscard]] std::size_t index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw InvalidArgument("variable '" + name_ + "' has no label '" + std::string(label) + "'");
  }

  void require_in_range(double x) const {
    if (!std::isfinite(x) || !universe_.contains(x)) {
      throw RangeError("value " + std::to_string(x) + " is outside the universe of '" + name_ + "'");
    }
  }

  friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;

 private:
  std::string name_;
  Universe universe_;
  std::vector<TriangularMF> mfs_;
};

struct LabelDegree {
  std::string label;
  double degree = 0.0;
};

[[nodiscard]] inline std::vector<LabelDegree> fuzzify(const LinguisticVariable& var, double x) {
  var.require_in_range(x);
  std::vector<LabelDegree> out;
  out.reserve(var.size());
  for (const auto& mf : var.mfs()) out.push_back({mf.label, mf(x)});
  return out;
}

// Index of the label with maximal membership. Ties go to the lower peak.
[[nodiscard]] inline std::size_t best_label_index(const LinguisticVariable& var, double x) {
  var.require_in_range(x);
  std::size_t best = 0;
  double best_degree = var.mfs()[0](x);
  for (std::size_t i = 1; i < var.size(); ++i) {
    const double d = var.mfs()[i](x);
    if (d > best_degree) {
      best = i;
      best_degree = d;
    }
  }
  return best;
}

[[nodiscard]] inline const std::string& best_label(const LinguisticVariable& var, double x) {
  return var.mfs()[best_label_index(var, x)].label;
}

struct FuzzyRule {
  // input variable name -> label
  std::map<std::string, std::string, std::less<>> antecedents;
  std::string consequent;
  // Support recorded at induction time. Reported, never used as a weight.
  double degree = 1.0;

  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

using RuleBase = std::vector<FuzzyRule>;

namespace detail {

inline const LinguisticVariable& find_variable(std::span<const LinguisticVariable> vars, std::string_view name) {
  for (const auto& v : vars) {
    if (v.name() == name) return v;
  }
  throw InvalidArgument("unknown input variable '" + std::string(name) + "'");
}

}  // namespace detail

// Min over the rule's antecedent memberships.
[[nodiscard]] inline double firing_strength(const FuzzyRule& rule, std::span<const LinguisticVariable> vars,
                                            const Inputs& inputs) {
  double strength = 1.0;
  for (const auto& [name, label] : rule.antecedents) {
    const auto& var = detail::find_variable(vars, name);
    const auto it = inputs.find(name);
    if (it == inputs.end()) throw InvalidArgument("missing input '" + name + "'");
    var.require_in_range(it->second);
    strength = std::min(strength, var.mfs()[var.index_of(label)](it->second));
  }
  return strength;
}

// A membership function sampled on the uniform grid of a universe.
struct SampledSet {
  Universe universe;
  std::vector<double> membership;
};

// Discrete centre of gravity: sum(x_i * mu_i) / sum(mu_i).
[[nodiscard]] inline double defuzzify_centroid(const SampledSet& set) {
  set.universe.validate();
  if (set.membership.size() != set.universe.samples()) {
    throw InvalidArgument("sampled set size does not match its universe grid");
  }
  double weighted = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < set.membership.size(); ++i) {
    const double mu = set.membership[i];
    if (!std::isfinite(mu) || mu < 0.0) throw InvalidArgument("sampled membership must be finite and non-negative");
    weighted += set.universe.sample(i) * mu;
    mass += mu;
  }
  if (!(mass > 0.0)) throw NoRuleCoverage("aggregated output is empty");
  return weighted / mass;
}

struct InferenceConfig {
  double grid_step = 0.1;

  friend bool operator==(const InferenceConfig&, const InferenceConfig&) = default;
};

struct InferenceResult {
  double crisp = 0.0;
  // One entry per rule, in rule-base order.
  std::vector<double> firing;
};

// Immutable once constructed; concurrent infer() calls on a shared instance
// are safe.
class MamdaniModel {
 public:
  MamdaniModel(std::vector<LinguisticVariable> inputs, LinguisticVariable output, RuleBase rules,
               InferenceConfig config = {})
      : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)), config_(config) {
    if (inputs_.empty()) throw InvalidArgument("model needs at least one input variable");
    std::set<std::string, std::less<>> names;
    for (const auto& v : inputs_) {
      if (!names.insert(v.name()).second) throw InvalidArgument("duplicate input variable '" + v.name() + "'");
    }
    if (output_.universe().lo != 0.0 || output_.universe().hi != 100.0) {
      throw InvalidArgument("output universe must be [0, 100]");
    }
    grid_ = Universe{output_.universe().lo, output_.universe().hi, config_.grid_step};
    grid_.validate();
    if (rules_.empty()) throw InvalidArgument("rule base is empty");

    compiled_.reserve(rules_.size());
    for (const auto& rule : rules_) {
      if (rule.antecedents.size() != inputs_.size()) {
        throw InvalidArgument("every rule must constrain all " + std::to_string(inputs_.size()) + " inputs");
      }
      if (!(rule.degree > 0.0 && rule.degree <= 1.0)) throw InvalidArgument("rule degree must lie in (0, 1]");
      CompiledRule c;
      for (std::size_t v = 0; v < inputs_.size(); ++v) {
        const auto it = rule.antecedents.find(inputs_[v].name());
        if (it == rule.antecedents.end()) {
          throw InvalidArgument("rule lacks an antecedent for '" + inputs_[v].name() + "'");
        }
        c.antecedent.push_back(inputs_[v].index_of(it->second));
      }
      c.consequent = output_.index_of(rule.consequent);
      compiled_.push_back(std::move(c));
    }

    const std::size_t n = grid_.samples();
    consequent_samples_.assign(output_.size(), std::vector<double>(n));
    for (std::size_t k = 0; k < output_.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) consequent_samples_[k][i] = output_.mfs()[k](grid_.sample(i));
    }
  }

  [[nodiscard]] const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  [[nodiscard]] const LinguisticVariable& output() const { return output_; }
  [[nodiscard]] const RuleBase& rules() const { return rules_; }
  [[nodiscard]] const InferenceConfig& config() const { return config_; }
  [[nodiscard]] const Universe& output_grid() const { return grid_; }

  [[nodiscard]] const LinguisticVariable& input(std::string_view name) const {
    return detail::find_variable(inputs_, name);
  }

  [[nodiscard]] std::vector<double> firing_strengths(const Inputs& inputs) const {
    check_inputs(inputs);
    std::vector<std::vector<double>> degrees(inputs_.size());
    for (std::size_t v = 0; v < inputs_.size(); ++v) {
      const double x = inputs.find(inputs_[v].name())->second;
      for (const auto& mf : inputs_[v].mfs()) degrees[v].push_back(mf(x));
    }
    std::vector<double> firing(rules_.size());
    for (std::size_t r = 0; r < compiled_.size(); ++r) {
      double w = 1.0;
      for (std::size_t v = 0; v < inputs_.size(); ++v) w = std::min(w, degrees[v][compiled_[r].antecedent[v]]);
      firing[r] = w;
    }
    return firing;
  }

  // Clipped consequents combined by pointwise max on the output grid.
  [[nodiscard]] SampledSet aggregate(std::span<const double> firing) const {
    if (firing.size() != rules_.size()) throw InvalidArgument("one firing strength per rule is required");
    SampledSet out{grid_, std::vector<double>(grid_.samples(), 0.0)};
    for (std::size_t r = 0; r < compiled_.size(); ++r) {
      const double w = firing[r];
      if (!(w > 0.0)) continue;
      const auto& shape = consequent_samples_[compiled_[r].consequent];
      for (std::size_t i = 0; i < shape.size(); ++i) {
        out.membership[i] = std::max(out.membership[i], std::min(w, shape[i]));
      }
    }
    return out;
  }

  [[nodiscard]] InferenceResult infer(const Inputs& inputs) const {
    InferenceResult result;
    result.firing = firing_strengths(inputs);
    if (std::none_of(result.firing.begin(), result.firing.end(), [](double w) { return w > 0.0; })) {
      throw NoRuleCoverage();
    }
    result.crisp = defuzzify_centroid(aggregate(result.firing));
    return result;
  }

 private:
  struct CompiledRule {
    std::vector<std::size_t> antecedent;  // MF index per input variable
    std::size_t consequent = 0;
  };

  void check_inputs(const Inputs& inputs) const {
    for (const auto& var : inputs_) {
      const auto it = inputs.find(var.name());
      if (it == inputs.end()) throw InvalidArgument("missing input '" + var.name() + "'");
      var.require_in_range(it->second);
    }
    for (const auto& [name, value] : inputs) {
      (void)value;
      (void)detail::find_variable(inputs_, name);
    }
  }

  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  RuleBase rules_;
  InferenceConfig config_;
  Universe grid_;
  std::vector<CompiledRule> compiled_;
  std::vector<std::vector<double>> consequent_samples_;
};

[[nodiscard]] inline InferenceResult infer(const MamdaniModel& model, const Inputs& inputs) {
  return model.infer(inputs);
}

// Inputs keyed by the canonical names, in questionnaire order.
[[nodiscard]] inline Inputs make_inputs(double content_quality, double hardware_quality,
                                        double environment_understanding, double user_interaction) {
  return {{std::string(kInputNames[0]), content_quality},
          {std::string(kInputNames[1]), hardware_quality},
          {std::string(kInputNames[2]), environment_understanding},
          {std::string(kInputNames[3]), user_interaction}};
}

}  // namespace qoefis
