#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include "qoefis/dataset.hpp"
#include "qoefis/synthetic.hpp"

namespace qoefis {
namespace {

const std::string kHeader = "participant_id,app,G1,G2,G3,G4,overall\n";

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_survey_csv(in, "test");
}

std::string error_of(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(LikertTest, FivePointMapping) {
  const double expect[] = {0.0, 25.0, 50.0, 75.0, 100.0};
  for (int i = 1; i <= 5; ++i) EXPECT_EQ(normalize_likert(i, 5), expect[i - 1]);
}

TEST(LikertTest, OtherScales) {
  EXPECT_EQ(normalize_likert(1, 2), 0.0);
  EXPECT_EQ(normalize_likert(2, 2), 100.0);
  for (int n = 2; n <= 11; ++n) {
    for (int i = 2; i <= n; ++i) EXPECT_LT(normalize_likert(i - 1, n), normalize_likert(i, n));
  }
}

TEST(LikertTest, Errors) {
  EXPECT_THROW((void)normalize_likert(0, 5), RangeError);
  EXPECT_THROW((void)normalize_likert(6, 5), RangeError);
  EXPECT_THROW((void)normalize_likert(1, 1), InvalidArgument);
}

TEST(CsvTest, ParsesMinimalFile) {
  const auto ds = parse(kHeader + "P1,YC,4,3,5,4,85\nP2,RR,1,2,2,2,30.5\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.provenance.row_count, 2u);
  EXPECT_EQ(ds.rows[0].participant_id, "P1");
  EXPECT_EQ(ds.rows[0].app, "YC");
  EXPECT_EQ(ds.rows[0].likert.at("G3"), 5);
  EXPECT_EQ(ds.rows[1].overall, 30.5);
  EXPECT_FALSE(ds.rows[0].gender.has_value());
}

TEST(CsvTest, OptionalColumnsQuotingAndLineEndings) {
  const auto ds = parse(
      "\xEF\xBB\xBFparticipant_id,app,gender,prior_ar,q_cq1,G1,G2,G3,G4,overall\r\n"
      "\"P,1\",YC,female,yes,,4,3,5,4,85\r\n"
      "\r\n"
      "P2,YC,\"ma\"\"le\",0,2,1,2,2,2,30\r\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.rows[0].participant_id, "P,1");
  EXPECT_EQ(ds.rows[0].prior_ar, true);
  EXPECT_FALSE(ds.rows[0].likert.contains("q_cq1"));
  EXPECT_EQ(ds.rows[1].gender, "ma\"le");
  EXPECT_EQ(ds.rows[1].prior_ar, false);
  EXPECT_EQ(ds.rows[1].likert.at("q_cq1"), 2);
}

TEST(CsvTest, OutOfRangeLikertNamesRowAndColumn) {
  const auto msg = error_of(kHeader + "P1,YC,4,6,5,4,85\n");
  EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("G2"), std::string::npos) << msg;
}

TEST(CsvTest, RejectsBadCells) {
  EXPECT_NE(error_of(kHeader + "P1,YC,4,3.5,5,4,85\n").find("non-integer"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "P1,YC,0,3,5,4,85\n").find("G1"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "P1,YC,4,,5,4,85\n").find("G2"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "P1,YC,4,3,5,4,101\n").find("overall"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "P1,YC,4,3,5,4,abc\n").find("overall"), std::string::npos);
  EXPECT_NE(error_of(kHeader + "P1,YC,4,3,5,4\n").find("expected 7 fields"), std::string::npos);
  EXPECT_NE(error_of(kHeader + ",YC,4,3,5,4,80\n").find("participant"), std::string::npos);
}

TEST(CsvTest, MissingColumnIsSchemaError) {
  std::istringstream in("participant_id,app,G1,G2,G3,G4\nP1,YC,4,3,5,4\n");
  EXPECT_THROW((void)parse_survey_csv(in), SchemaError);
  std::istringstream unknown("participant_id,app,G1,G2,G3,G4,overall,latency\nP1,YC,4,3,5,4,80,3\n");
  EXPECT_THROW((void)parse_survey_csv(unknown), SchemaError);
  std::istringstream dup("participant_id,app,G1,G1,G2,G3,G4,overall\nP1,YC,4,4,3,5,4,80\n");
  EXPECT_THROW((void)parse_survey_csv(dup), SchemaError);
}

TEST(CsvTest, DuplicateParticipant) {
  const auto msg = error_of(kHeader + "P1,YC,4,3,5,4,85\nP1,YC,4,3,5,4,80\n");
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
}

TEST(CsvTest, EmptyInputs) {
  EXPECT_NE(error_of("").find("empty dataset"), std::string::npos);
  EXPECT_NE(error_of(kHeader).find("empty dataset"), std::string::npos);
  EXPECT_THROW((void)load_survey_csv("/nonexistent/survey.csv"), DataError);
}

TEST(CsvTest, RoundTripSynthetic) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = generate_synthetic_survey({.rows = 40, .seed = seed});
    std::ostringstream out;
    write_survey_csv(out, ds);
    const auto back = parse(out.str());
    EXPECT_EQ(back.rows, ds.rows) << "seed " << seed;
    std::ostringstream again;
    write_survey_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(TrainingTest, NormalisesHighLevelAnswers) {
  const auto ds = parse(kHeader + "P1,YC,4,3,5,4,85\nP2,RR,1,1,1,1,0\n");
  const auto recs = to_training(ds);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].inputs, make_inputs(75, 50, 100, 75));
  EXPECT_EQ(recs[0].overall, 85.0);
  EXPECT_EQ(recs[0].group, "YC");
  EXPECT_EQ(recs[1].inputs, make_inputs(0, 0, 0, 0));
}

TEST(SplitTest, SeventyFiveRows) {
  const auto ds = generate_synthetic_survey({.rows = 75, .seed = 1});
  const auto s = split(ds, 0.6, 0);
  EXPECT_EQ(s.train.size(), 45u);
  EXPECT_EQ(s.test.size(), 30u);
  std::multiset<std::string> ids;
  for (const auto& r : s.train.rows) ids.insert(r.participant_id);
  for (const auto& r : s.test.rows) ids.insert(r.participant_id);
  std::multiset<std::string> expect;
  for (const auto& r : ds.rows) expect.insert(r.participant_id);
  EXPECT_EQ(ids, expect);
}

TEST(SplitTest, PartitionPropertyAcrossSizes) {
  for (std::size_t n : {1u, 2u, 7u, 31u, 100u}) {
    const auto ds = generate_synthetic_survey({.rows = n, .seed = n});
    for (double f : {0.1, 0.5, 0.6, 0.99}) {
      const auto s = split(ds, f, 3);
      EXPECT_EQ(s.train.size() + s.test.size(), n);
      EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
      std::set<std::string> seen;
      for (const auto& r : s.train.rows) EXPECT_TRUE(seen.insert(r.participant_id).second);
      for (const auto& r : s.test.rows) EXPECT_TRUE(seen.insert(r.participant_id).second);
    }
  }
}

TEST(SplitTest, FullFractionAndDeterminism) {
  const auto ds = generate_synthetic_survey({.rows = 30, .seed = 2});
  const auto all = split(ds, 1.0, 9);
  EXPECT_EQ(all.train.size(), 30u);
  EXPECT_TRUE(all.test.empty());

  const auto a = split(ds, 0.6, 17);
  const auto b = split(ds, 0.6, 17);
  EXPECT_EQ(a.train.rows, b.train.rows);
  EXPECT_EQ(a.test.rows, b.test.rows);
  const auto c = split(ds, 0.6, 18);
  EXPECT_NE(a.train.rows, c.train.rows);
}

TEST(SplitTest, StratifiedKeepsApplicationMix) {
  const auto ds = generate_synthetic_survey({.rows = 75, .seed = 4, .minority_share = 0.2});
  const auto s = split_stratified(ds, 0.6, 5);
  const auto count = [](const Dataset& d, const std::string& app) {
    return std::count_if(d.rows.begin(), d.rows.end(), [&](const SurveyRow& r) { return r.app == app; });
  };
  EXPECT_EQ(count(s.train, "RR"), 36);
  EXPECT_EQ(count(s.test, "RR"), 24);
  EXPECT_EQ(count(s.train, "YC"), 9);
  EXPECT_EQ(count(s.test, "YC"), 6);
}

TEST(SplitTest, Errors) {
  const auto ds = generate_synthetic_survey({.rows = 10});
  EXPECT_THROW((void)split(ds, 0.0, 0), InvalidArgument);
  EXPECT_THROW((void)split(ds, 1.5, 0), InvalidArgument);
  EXPECT_THROW((void)split(Dataset{}, 0.5, 0), InvalidArgument);
  EXPECT_THROW((void)split_stratified(ds, -0.1, 0), InvalidArgument);
}

TEST(SyntheticTest, RowsAreValidSurveyAnswers) {
  const auto ds = generate_synthetic_survey({.rows = 200, .seed = 6});
  ASSERT_EQ(ds.size(), 200u);
  for (const auto& r : ds.rows) {
    for (const auto& [name, v] : r.likert) {
      EXPECT_GE(v, 1) << name;
      EXPECT_LE(v, 5) << name;
    }
    EXPECT_GE(r.overall, 0.0);
    EXPECT_LE(r.overall, 100.0);
  }
  EXPECT_EQ(generate_synthetic_survey({.rows = 200, .seed = 6}).rows, ds.rows);
}

}  // namespace
}  // namespace qoefis
