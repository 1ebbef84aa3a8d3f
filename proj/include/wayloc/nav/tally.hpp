#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace wayloc::nav {

/// Route length class of a navigation query.
enum class Category { Small, Medium, Large };

[[nodiscard]] char to_char(Category c) noexcept;
/// "S", "M" or "L"; throws InvalidArgument otherwise.
[[nodiscard]] Category parse_category(const std::string& s);

/// One human verdict on one generated instruction set.
struct Judgment {
  std::string query_id;
  int trial_index = 0;
  bool correct = false;
  Category category = Category::Small;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

/// JSON Lines, one object per judgment:
///   {"query_id": "SCIB-1", "trial": 1, "correct": true, "category": "S"}
[[nodiscard]] std::vector<Judgment> parse_judgments(const std::string& jsonl);
[[nodiscard]] std::vector<Judgment> load_judgments(const std::filesystem::path& path);
/// Appends one line; the judgment file is append-only.
void append_judgment(const std::filesystem::path& path, const Judgment& j);
[[nodiscard]] nlohmann::json to_json(const Judgment& j);

/// A row of a previously published tally, to be checked against recomputed counts.
struct ReportedRow {
  std::string query_id;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  double pct_correct = 0.0;
  double pct_incorrect = 0.0;
};

/// {"rows": [{"query_id", "correct", "incorrect", "pct_correct", "pct_incorrect"}, ...]}
[[nodiscard]] std::vector<ReportedRow> load_reported(const std::filesystem::path& path);

struct TallyRow {
  std::string query_id;
  std::optional<Category> category;  ///< empty on the totals row
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  [[nodiscard]] std::size_t total() const noexcept { return correct + incorrect; }
  [[nodiscard]] double pct_correct() const noexcept;
  [[nodiscard]] double pct_incorrect() const noexcept;
};

struct Discrepancy {
  std::string query_id;
  std::string detail;
};

struct TallyReport {
  std::vector<TallyRow> rows;  ///< order of first appearance
  TallyRow totals;
  std::vector<Discrepancy> discrepancies;  ///< reported rows that disagree with their own counts or ours
};

/// Counts per query and overall. When `reported` is given, every reported row
/// is checked: its percentages against its own counts, and its counts against
/// the recomputed ones (percentages compared at two decimals).
/// Throws EmptyJudgments, InvalidArgument (one query id with two categories).
[[nodiscard]] TallyReport tally(std::span<const Judgment> judgments,
                                std::span<const ReportedRow> reported = {});

/// Rounds to two decimals, the precision percentages are reported at.
[[nodiscard]] double round2(double pct) noexcept;

[[nodiscard]] nlohmann::json to_json(const TallyReport& report);
/// Plain-text table: query, correct (pct), incorrect (pct), then totals.
[[nodiscard]] std::string format_table(const TallyReport& report);

}  // namespace wayloc::nav
