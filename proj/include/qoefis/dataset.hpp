#pragma once

// Survey ingestion: the CSV interchange format, Likert normalisation and
// seeded train/test splitting.
//
// CSV contract (UTF-8, comma separated, header required):
//   participant_id, app, [gender], [age_range], [prior_ar], [prior_gesture],
//   [q_*...], G1, G2, G3, G4, overall
// Columns may appear in any order. G1..G4 and q_* are five-point Likert
// answers (1..5); overall is the 0..100 general rating. q_* answers are
// kept as metadata and never feed the model.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qoefis/error.hpp"
#include "qoefis/fuzzy.hpp"
#include "qoefis/numfmt.hpp"
#include "qoefis/rule_induction.hpp"

namespace qoefis {

inline constexpr int kLikertOptions = 5;
inline constexpr std::array<std::string_view, 4> kHighLevelColumns{"G1", "G2", "G3", "G4"};

// (i_in - 1) / (n - 1) * 100
[[nodiscard]] inline double normalize_likert(int i_in, int n) {
  if (n < 2) throw InvalidArgument("a Likert scale needs at least 2 options");
  if (i_in < 1 || i_in > n) {
    throw RangeError("Likert answer " + std::to_string(i_in) + " outside 1.." + std::to_string(n));
  }
  return static_cast<double>(i_in - 1) * 100.0 / static_cast<double>(n - 1);
}

struct SurveyRow {
  std::string participant_id;
  std::string app;
  std::optional<std::string> gender;
  std::optional<std::string> age_range;
  std::optional<bool> prior_ar;
  std::optional<bool> prior_gesture;
  std::map<std::string, int> likert;  // G1..G4 and any answered q_* items
  double overall = 0.0;

  friend bool operator==(const SurveyRow&, const SurveyRow&) = default;
};

struct DatasetProvenance {
  std::string source;
  std::size_t row_count = 0;
};

struct Dataset {
  std::vector<SurveyRow> rows;
  DatasetProvenance provenance;

  [[nodiscard]] std::size_t size() const { return rows.size(); }
  [[nodiscard]] bool empty() const { return rows.empty(); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct CsvRecord {
  std::size_t line = 0;  // physical line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
// Blank lines are skipped.
inline std::vector<CsvRecord> read_csv(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);

  std::vector<CsvRecord> out;
  CsvRecord rec;
  std::string field;
  std::size_t line = 1;
  rec.line = line;
  bool quoted = false;
  bool field_started = false;

  auto end_record = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    const bool blank = rec.fields.size() == 1 && trim(rec.fields[0]).empty() && !field_started;
    if (!blank) out.push_back(std::move(rec));
    rec = CsvRecord{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        rec.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        rec.line = line;
        break;
      default:
        field += ch;
        break;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(rec.line) + ": unterminated quoted field");
  if (!field.empty() || !rec.fields.empty() || field_started) end_record();
  return out;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string where(std::size_t row, std::size_t line, std::string_view column) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + "), column " + std::string(column);
}

inline std::optional<bool> parse_flag(const std::string& cell, const std::string& loc) {
  if (cell.empty()) return std::nullopt;
  std::string v;
  for (char ch : cell) v += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (v == "1" || v == "true" || v == "yes" || v == "y") return true;
  if (v == "0" || v == "false" || v == "no" || v == "n") return false;
  throw DataError(loc + ": expected a yes/no flag, got '" + cell + "'");
}

inline int parse_likert(const std::string& cell, const std::string& loc) {
  int value = 0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, value);
  if (cell.empty() || res.ec != std::errc{} || res.ptr != last) {
    throw DataError(loc + ": non-integer Likert value '" + cell + "'");
  }
  if (value < 1 || value > kLikertOptions) {
    throw DataError(loc + ": Likert value " + std::to_string(value) + " outside 1.." +
                    std::to_string(kLikertOptions));
  }
  return value;
}

inline double parse_overall(const std::string& cell, const std::string& loc) {
  double value = 0.0;
  const auto* last = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), last, value);
  if (cell.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw DataError(loc + ": overall rating '" + cell + "' is not a number");
  }
  if (value < 0.0 || value > 100.0) throw DataError(loc + ": overall rating " + cell + " outside [0, 100]");
  return value;
}

}  // namespace detail

[[nodiscard]] inline Dataset parse_survey_csv(std::istream& in, std::string source = "<stream>") {
  const auto records = detail::read_csv(in);
  if (records.empty()) throw DataError("empty dataset: no header row");

  std::map<std::string, std::size_t, std::less<>> col;
  const auto& header = records.front();
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const std::string name = detail::trim(header.fields[i]);
    const bool known = name == "participant_id" || name == "app" || name == "gender" || name == "age_range" ||
                       name == "prior_ar" || name == "prior_gesture" || name == "overall" ||
                       name.rfind("q_", 0) == 0 ||
                       std::find(kHighLevelColumns.begin(), kHighLevelColumns.end(), name) != kHighLevelColumns.end();
    if (!known) throw SchemaError("unknown column '" + name + "'");
    if (!col.emplace(name, i).second) throw SchemaError("duplicate column '" + name + "'");
  }
  std::vector<std::string> required{"participant_id", "app", "overall"};
  for (auto g : kHighLevelColumns) required.emplace_back(g);
  for (const auto& name : required) {
    if (!col.contains(name)) throw SchemaError("missing required column '" + name + "'");
  }
  if (records.size() == 1) throw DataError("empty dataset: header without rows");

  Dataset ds;
  ds.provenance.source = std::move(source);
  std::set<std::string, std::less<>> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.fields.size()) {
      throw DataError("row " + std::to_string(r) + " (line " + std::to_string(rec.line) + "): expected " +
                      std::to_string(header.fields.size()) + " fields, got " + std::to_string(rec.fields.size()));
    }
    auto cell = [&](std::string_view name) { return detail::trim(rec.fields[col.find(name)->second]); };
    auto loc = [&](std::string_view name) { return detail::where(r, rec.line, name); };
    auto optional_text = [&](std::string_view name) -> std::optional<std::string> {
      if (!col.contains(name)) return std::nullopt;
      auto v = cell(name);
      if (v.empty()) return std::nullopt;
      return v;
    };

    SurveyRow row;
    row.participant_id = cell("participant_id");
    if (row.participant_id.empty()) throw DataError(loc("participant_id") + ": empty participant id");
    if (!ids.insert(row.participant_id).second) {
      throw DataError(loc("participant_id") + ": duplicate participant id '" + row.participant_id + "'");
    }
    row.app = cell("app");
    if (row.app.empty()) throw DataError(loc("app") + ": empty application code");
    row.gender = optional_text("gender");
    row.age_range = optional_text("age_range");
    if (col.contains("prior_ar")) row.prior_ar = detail::parse_flag(cell("prior_ar"), loc("prior_ar"));
    if (col.contains("prior_gesture")) {
      row.prior_gesture = detail::parse_flag(cell("prior_gesture"), loc("prior_gesture"));
    }
    for (const auto& [name, index] : col) {
      (void)index;
      const bool high = std::find(kHighLevelColumns.begin(), kHighLevelColumns.end(), name) != kHighLevelColumns.end();
      const bool low = name.rfind("q_", 0) == 0;
      if (!high && !low) continue;
      const auto v = cell(name);
      if (low && v.empty()) continue;
      row.likert[name] = detail::parse_likert(v, loc(name));
    }
    row.overall = detail::parse_overall(cell("overall"), loc("overall"));
    ds.rows.push_back(std::move(row));
  }
  ds.provenance.row_count = ds.rows.size();
  return ds;
}

[[nodiscard]] inline Dataset load_survey_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_survey_csv(in, path);
}

// Canonical layout: identity columns, demographic columns that carry at
// least one value, q_* sorted by name, G1..G4, overall.
inline void write_survey_csv(std::ostream& out, const Dataset& ds) {
  bool gender = false, age = false, ar = false, gesture = false;
  std::set<std::string> low;
  for (const auto& row : ds.rows) {
    gender |= row.gender.has_value();
    age |= row.age_range.has_value();
    ar |= row.prior_ar.has_value();
    gesture |= row.prior_gesture.has_value();
    for (const auto& [name, v] : row.likert) {
      (void)v;
      if (name.rfind("q_", 0) == 0) low.insert(name);
    }
  }
  std::vector<std::string> header{"participant_id", "app"};
  if (gender) header.emplace_back("gender");
  if (age) header.emplace_back("age_range");
  if (ar) header.emplace_back("prior_ar");
  if (gesture) header.emplace_back("prior_gesture");
  header.insert(header.end(), low.begin(), low.end());
  for (auto g : kHighLevelColumns) header.emplace_back(g);
  header.emplace_back("overall");

  auto flag = [](const std::optional<bool>& f) -> std::string {
    if (!f) return "";
    return *f ? "true" : "false";
  };
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : ds.rows) {
    std::vector<std::string> cells{detail::csv_escape(row.participant_id), detail::csv_escape(row.app)};
    if (gender) cells.push_back(detail::csv_escape(row.gender.value_or("")));
    if (age) cells.push_back(detail::csv_escape(row.age_range.value_or("")));
    if (ar) cells.push_back(flag(row.prior_ar));
    if (gesture) cells.push_back(flag(row.prior_gesture));
    for (const auto& q : low) {
      const auto it = row.likert.find(q);
      cells.push_back(it == row.likert.end() ? "" : std::to_string(it->second));
    }
    for (auto g : kHighLevelColumns) cells.push_back(std::to_string(row.likert.at(std::string(g))));
    cells.push_back(format_shortest(row.overall));
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
}

// G1..G4 become the four normalised model inputs; overall passes through.
[[nodiscard]] inline std::vector<TrainingRecord> to_training(const Dataset& ds) {
  std::vector<TrainingRecord> out;
  out.reserve(ds.rows.size());
  for (const auto& row : ds.rows) {
    TrainingRecord rec;
    for (std::size_t i = 0; i < kHighLevelColumns.size(); ++i) {
      const auto it = row.likert.find(std::string(kHighLevelColumns[i]));
      if (it == row.likert.end()) {
        throw DataError("participant '" + row.participant_id + "' lacks " + std::string(kHighLevelColumns[i]));
      }
      rec.inputs.emplace(std::string(kInputNames[i]), normalize_likert(it->second, kLikertOptions));
    }
    rec.overall = row.overall;
    rec.group = row.app;
    out.push_back(std::move(rec));
  }
  return out;
}

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

namespace detail {

inline void check_fraction(double f) {
  if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("train fraction must lie in (0, 1]");
}

inline DatasetSplit assemble_split(const Dataset& ds, const std::vector<std::size_t>& train_idx,
                                   const std::vector<std::size_t>& test_idx) {
  DatasetSplit s;
  for (auto i : train_idx) s.train.rows.push_back(ds.rows[i]);
  for (auto i : test_idx) s.test.rows.push_back(ds.rows[i]);
  s.train.provenance = {ds.provenance.source + " [train]", s.train.rows.size()};
  s.test.provenance = {ds.provenance.source + " [test]", s.test.rows.size()};
  return s;
}

}  // namespace detail

// Seeded permutation followed by a prefix split; the train part holds
// round(fraction * n) rows.
[[nodiscard]] inline DatasetSplit split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (ds.empty()) throw InvalidArgument("empty dataset");
  detail::check_fraction(train_fraction);
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ds.size())));
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  return detail::assemble_split(ds, train, test);
}

// Same as split(), applied separately within each application code (in
// sorted code order) so both parts keep the application mix.
[[nodiscard]] inline DatasetSplit split_stratified(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (ds.empty()) throw InvalidArgument("empty dataset");
  detail::check_fraction(train_fraction);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.size(); ++i) groups[ds.rows[i].app].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, test;
  for (auto& [app, idx] : groups) {
    (void)app;
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  return detail::assemble_split(ds, train, test);
}

}  // namespace qoefis
