#pragma once

// Model validation against held-out ratings: QoE_u (user rating) versus
// QoE_f (model estimate), per application and pooled.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qoefis/error.hpp"
#include "qoefis/fuzzy.hpp"
#include "qoefis/numfmt.hpp"
#include "qoefis/rule_induction.hpp"
#include "qoefis/stats.hpp"

namespace qoefis {

struct EvaluationBlock {
  std::string group;
  std::size_t records = 0;
  std::size_t covered = 0;
  std::size_t uncovered = 0;  // records for which no rule fired; excluded
  std::optional<DescriptiveStats> user;  // QoE_u
  std::optional<DescriptiveStats> fis;   // QoE_f
  std::optional<double> rmse;
  std::optional<TTestResult> ttest;
  std::vector<std::string> notes;
};

struct EvaluationReport {
  double alpha = 0.05;
  double confidence = 0.95;
  EvaluationBlock pooled;
  std::vector<EvaluationBlock> groups;  // sorted by group code
};

namespace detail {

inline EvaluationBlock summarize(std::string group, std::size_t records,
                                 const std::vector<std::pair<double, double>>& pairs, double alpha,
                                 double confidence) {
  EvaluationBlock b;
  b.group = std::move(group);
  b.records = records;
  b.covered = pairs.size();
  b.uncovered = records - pairs.size();
  if (pairs.empty()) {
    b.notes.emplace_back("no covered records");
    return b;
  }
  b.rmse = rmse(pairs);
  if (pairs.size() < 2) {
    b.notes.emplace_back("n < 2: descriptive intervals and t-test unavailable");
    return b;
  }
  std::vector<double> user, fis;
  for (const auto& [u, f] : pairs) {
    user.push_back(u);
    fis.push_back(f);
  }
  b.user = descriptive(user, confidence);
  b.fis = descriptive(fis, confidence);
  b.ttest = paired_t_test(pairs, alpha);
  if (b.ttest->exact_difference) b.notes.emplace_back("exact difference: every pair differs by the same amount");
  return b;
}

}  // namespace detail

// Records for which no rule fires are excluded and counted, never imputed.
[[nodiscard]] inline EvaluationReport evaluate(const MamdaniModel& model, std::span<const TrainingRecord> test,
                                               double alpha = 0.05, double confidence = 0.95) {
  if (test.empty()) throw InvalidArgument("empty test set");
  std::vector<std::optional<double>> estimates(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    try {
      estimates[i] = model.infer(test[i].inputs).crisp;
    } catch (const NoRuleCoverage&) {
    }
  }

  std::vector<std::pair<double, double>> all;
  std::map<std::string, std::pair<std::size_t, std::vector<std::pair<double, double>>>> by_group;
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto& g = by_group[test[i].group];
    ++g.first;
    if (!estimates[i]) continue;
    all.emplace_back(test[i].overall, *estimates[i]);
    g.second.emplace_back(test[i].overall, *estimates[i]);
  }
  if (all.empty()) throw NoRuleCoverage("no test record is covered by the rule base");

  EvaluationReport report;
  report.alpha = alpha;
  report.confidence = confidence;
  report.pooled = detail::summarize("pooled", test.size(), all, alpha, confidence);
  for (const auto& [group, data] : by_group) {
    report.groups.push_back(detail::summarize(group, data.first, data.second, alpha, confidence));
  }
  return report;
}

namespace detail {

inline nlohmann::json stats_json(const std::optional<DescriptiveStats>& s) {
  if (!s) return nullptr;
  return {{"n", s->n},         {"mean", s->mean}, {"se_mean", s->se_mean}, {"median", s->median},
          {"sd", s->sd},       {"ci_lo", s->ci_lo}, {"ci_hi", s->ci_hi},   {"confidence", s->confidence}};
}

inline nlohmann::json block_json(const EvaluationBlock& b) {
  nlohmann::json j = {{"group", b.group},         {"records", b.records}, {"covered", b.covered},
                      {"uncovered", b.uncovered}, {"notes", b.notes},     {"qoe_u", stats_json(b.user)},
                      {"qoe_f", stats_json(b.fis)}};
  j["rmse"] = b.rmse ? nlohmann::json(*b.rmse) : nlohmann::json();
  if (b.ttest) {
    const auto& t = *b.ttest;
    j["ttest"] = {{"t", std::isfinite(t.t) ? nlohmann::json(t.t) : nlohmann::json()},
                  {"df", t.df},
                  {"p", t.p},
                  {"alpha", t.alpha},
                  {"reject_null", t.reject_null},
                  {"mean_difference", t.mean_difference},
                  {"sd_difference", t.sd_difference},
                  {"exact_difference", t.exact_difference}};
  } else {
    j["ttest"] = nullptr;
  }
  return j;
}

inline std::string cell(const nlohmann::json& v, int decimals = 3) {
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  return format_fixed(v.get<double>(), decimals);
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline void render_block(std::ostringstream& out, const nlohmann::json& b) {
  const auto stat = [](const nlohmann::json& s, const char* key) {
    return s.is_null() ? std::string("-") : cell(s.at(key));
  };
  const auto& t = b.at("ttest");
  std::string t_value = "-";
  if (!t.is_null()) {
    if (!t.at("t").is_null()) {
      t_value = cell(t.at("t"));
    } else {
      t_value = t.at("mean_difference").get<double>() > 0 ? "inf" : "-inf";
    }
  }
  const std::string df = t.is_null() ? "-" : cell(t.at("df"));
  const std::string p = t.is_null() ? "-" : cell(t.at("p"));
  const std::string reject = t.is_null() ? "-" : cell(t.at("reject_null"));
  const std::string rmse = cell(b.at("rmse"));

  const char* series[2] = {"QoE_u", "QoE_f"};
  const char* keys[2] = {"qoe_u", "qoe_f"};
  for (int r = 0; r < 2; ++r) {
    const auto& s = b.at(keys[r]);
    std::string line = pad(r == 0 ? b.at("group").get<std::string>() : "", 10) + pad(series[r], 7) +
                       pad(s.is_null() ? std::to_string(b.at("covered").get<std::size_t>()) : cell(s.at("n")), 5) +
                       pad(stat(s, "mean"), 9) + pad(stat(s, "ci_lo"), 9) + pad(stat(s, "ci_hi"), 9) +
                       pad(stat(s, "se_mean"), 8) + pad(stat(s, "median"), 9) + pad(stat(s, "sd"), 8);
    if (r == 0) line += pad(rmse, 8) + pad(t_value, 9) + pad(df, 4) + pad(p, 8) + reject;
    line.erase(line.find_last_not_of(' ') + 1);
    out << line << '\n';
  }
  out << pad("", 10) << "covered " << b.at("covered").get<std::size_t>() << " of " << b.at("records").get<std::size_t>()
      << " records, uncovered " << b.at("uncovered").get<std::size_t>() << '\n';
  for (const auto& note : b.at("notes")) out << pad("", 10) << "note: " << note.get<std::string>() << '\n';
}

}  // namespace detail

[[nodiscard]] inline nlohmann::json to_json(const EvaluationReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups) groups.push_back(detail::block_json(g));
  return {{"alpha", report.alpha},
          {"confidence", report.confidence},
          {"pooled", detail::block_json(report.pooled)},
          {"groups", groups}};
}

// Table-style text rendering. Depends only on the JSON document, so a
// stored report re-renders identically.
[[nodiscard]] inline std::string render_report_text(const nlohmann::json& report) {
  std::ostringstream out;
  const double confidence = report.at("confidence").get<double>();
  out << "QoE model evaluation (alpha = " << format_shortest(report.at("alpha").get<double>()) << ", "
      << format_shortest(confidence * 100.0) << "% confidence intervals)\n\n";
  out << detail::pad("Group", 10) << detail::pad("Series", 7) << detail::pad("N", 5) << detail::pad("Mean", 9)
      << detail::pad("CI low", 9) << detail::pad("CI high", 9) << detail::pad("SE", 8) << detail::pad("Median", 9)
      << detail::pad("SD", 8) << detail::pad("RMSE", 8) << detail::pad("t", 9) << detail::pad("df", 4)
      << detail::pad("p", 8) << "Reject H0\n";
  for (const auto& g : report.at("groups")) detail::render_block(out, g);
  detail::render_block(out, report.at("pooled"));
  return out.str();
}

}  // namespace qoefis
