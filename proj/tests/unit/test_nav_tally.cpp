#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wayloc/error.hpp"
#include "wayloc/nav/tally.hpp"

using namespace wayloc;
using namespace wayloc::nav;

namespace {

const auto kData = testkit::source_dir() / "data" / "nav";

const TallyRow& row(const TallyReport& r, const std::string& id) {
  for (const auto& x : r.rows)
    if (x.query_id == id) return x;
  throw std::out_of_range(id);
}

}  // namespace

TEST(Tally, FixtureTotals) {
  const auto report = tally(load_judgments(kData / "scib_judgments.jsonl"));
  EXPECT_EQ(report.totals.correct, 18u);
  EXPECT_EQ(report.totals.incorrect, 6u);
  EXPECT_EQ(round2(report.totals.pct_correct()), 75.00);
  EXPECT_EQ(round2(report.totals.pct_incorrect()), 25.00);
  ASSERT_EQ(report.rows.size(), 5u);
  EXPECT_EQ(row(report, "SCIB-2").total(), 4u);
  EXPECT_EQ(row(report, "SCIB-3").category, Category::Large);
}

TEST(Tally, ScibOneRow) {
  const auto report = tally(load_judgments(kData / "scib_judgments.jsonl"));
  const auto& r = row(report, "SCIB-1");
  EXPECT_EQ(r.correct, 4u);
  EXPECT_EQ(r.incorrect, 1u);
  EXPECT_EQ(round2(r.pct_correct()), 80.00);
  EXPECT_EQ(round2(r.pct_incorrect()), 20.00);
}

TEST(Tally, OnlyScibFourDisagreesWithReportedRows) {
  const auto report =
      tally(load_judgments(kData / "scib_judgments.jsonl"), load_reported(kData / "scib_reported.json"));
  ASSERT_FALSE(report.discrepancies.empty());
  for (const auto& d : report.discrepancies) EXPECT_EQ(d.query_id, "SCIB-4") << d.detail;
  EXPECT_EQ(round2(row(report, "SCIB-4").pct_correct()), 40.00);
}

TEST(Tally, AllCorrectAndEmpty) {
  std::vector<Judgment> js;
  for (int i = 1; i <= 5; ++i) js.push_back({"Q", i, true, Category::Medium});
  const auto report = tally(js);
  EXPECT_EQ(report.rows[0].pct_correct(), 100.0);
  EXPECT_EQ(report.rows[0].pct_incorrect(), 0.0);
  EXPECT_THROW((void)tally(std::vector<Judgment>{}), Error);
}

TEST(Tally, RowsSumToHundredAndTotalsAreColumnSums) {
  std::mt19937_64 rng(75);
  for (int c = 0; c < 300; ++c) {
    std::vector<Judgment> js;
    const int queries = 1 + static_cast<int>(rng() % 6);
    for (int q = 0; q < queries; ++q) {
      const int trials = 1 + static_cast<int>(rng() % 7);
      for (int t = 1; t <= trials; ++t)
        js.push_back({"Q" + std::to_string(q), t, rng() % 3 != 0, static_cast<Category>(q % 3)});
    }
    const auto report = tally(js);
    std::size_t ok = 0, bad = 0;
    for (const auto& r : report.rows) {
      EXPECT_NEAR(round2(r.pct_correct()) + round2(r.pct_incorrect()), 100.0, 0.011);
      ok += r.correct;
      bad += r.incorrect;
    }
    EXPECT_EQ(report.totals.correct, ok);
    EXPECT_EQ(report.totals.incorrect, bad);
  }
}

TEST(Judgments, JsonlRoundTripAndValidation) {
  const auto dir = testkit::scratch_dir("judgments");
  const Judgment j{"SCIB-9", 3, false, Category::Large};
  append_judgment(dir / "j.jsonl", j);
  append_judgment(dir / "j.jsonl", j);
  const auto back = load_judgments(dir / "j.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].query_id, "SCIB-9");
  EXPECT_EQ(back[0].category, Category::Large);
  EXPECT_FALSE(back[0].correct);
  EXPECT_THROW((void)parse_category("X"), Error);
  EXPECT_THROW((void)parse_judgments("{\"query_id\":\"a\"}\n"), std::exception);
  EXPECT_THROW((void)tally(std::vector<Judgment>{{"Q", 1, true, Category::Small}, {"Q", 2, true, Category::Large}}),
               Error);
}

TEST(Tally, TableFormatting) {
  const auto text = format_table(tally(load_judgments(kData / "scib_judgments.jsonl")));
  EXPECT_NE(text.find("SCIB-1 (S)"), std::string::npos);
  EXPECT_NE(text.find("18 (75.00%)"), std::string::npos);
  EXPECT_NE(text.find("6 (25.00%)"), std::string::npos);
}
