#pragma once

// Rule induction from labelled examples (Wang-Mendel style): every record
// proposes one rule built from the best-matching label of each variable.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qoefis/error.hpp"
#include "qoefis/fuzzy.hpp"

namespace qoefis {

struct TrainingRecord {
  Inputs inputs;  // normalised 0..100 scores keyed by input variable name
  double overall = 0.0;
  std::string group;  // application code; only used to split evaluation reports

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

struct Induction {
  RuleBase rules;
  // Records whose overall score has zero membership in every output label
  // (only possible exactly on an outer foot) cannot support a rule.
  std::size_t unsupported_records = 0;
};

// Proposes one rule per record with degree = product of the five winning
// memberships. Records sharing an antecedent combination keep the proposal
// with the highest degree; equal degrees go to the lower consequent peak.
// The result is ordered by antecedent label indices, so it does not depend
// on record order.
[[nodiscard]] inline Induction induce(std::span<const TrainingRecord> records,
                                      std::span<const LinguisticVariable> inputs, const LinguisticVariable& output) {
  if (records.empty()) throw InvalidArgument("rule induction needs at least one record");
  if (inputs.empty()) throw InvalidArgument("rule induction needs input variables");

  struct Proposal {
    std::size_t consequent;
    double degree;
  };
  std::map<std::vector<std::size_t>, Proposal> best;
  Induction out;

  for (const auto& record : records) {
    std::vector<std::size_t> key;
    key.reserve(inputs.size());
    double degree = 1.0;
    for (const auto& var : inputs) {
      const auto it = record.inputs.find(var.name());
      if (it == record.inputs.end()) throw InvalidArgument("record lacks input '" + var.name() + "'");
      const std::size_t idx = best_label_index(var, it->second);
      degree *= var.mfs()[idx](it->second);
      key.push_back(idx);
    }
    const std::size_t consequent = best_label_index(output, record.overall);
    degree *= output.mfs()[consequent](record.overall);
    if (!(degree > 0.0)) {
      ++out.unsupported_records;
      continue;
    }
    auto [slot, inserted] = best.try_emplace(std::move(key), Proposal{consequent, degree});
    if (!inserted) {
      auto& cur = slot->second;
      if (degree > cur.degree || (degree == cur.degree && consequent < cur.consequent)) {
        cur = Proposal{consequent, degree};
      }
    }
  }
  if (best.empty()) throw DataError("no training record supports a rule");

  out.rules.reserve(best.size());
  for (const auto& [key, proposal] : best) {
    FuzzyRule rule;
    for (std::size_t v = 0; v < inputs.size(); ++v) {
      rule.antecedents.emplace(inputs[v].name(), inputs[v].mfs()[key[v]].label);
    }
    rule.consequent = output.mfs()[proposal.consequent].label;
    rule.degree = proposal.degree;
    out.rules.push_back(std::move(rule));
  }
  return out;
}

[[nodiscard]] inline RuleBase induce_rules(std::span<const TrainingRecord> records,
                                           std::span<const LinguisticVariable> inputs,
                                           const LinguisticVariable& output) {
  return induce(records, inputs, output).rules;
}

struct RuleBaseStats {
  std::size_t count = 0;
  // (variable, label) -> number of rules using it
  std::map<std::pair<std::string, std::string>, std::size_t> label_usage;
};

[[nodiscard]] inline RuleBaseStats rulebase_stats(const RuleBase& rules, std::string_view output_name = kOutputName) {
  RuleBaseStats stats;
  stats.count = rules.size();
  for (const auto& rule : rules) {
    for (const auto& [var, label] : rule.antecedents) ++stats.label_usage[{var, label}];
    ++stats.label_usage[{std::string(output_name), rule.consequent}];
  }
  return stats;
}

}  // namespace qoefis
