#include "wayloc/nav/tally.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "wayloc/error.hpp"

namespace wayloc::nav {

namespace {

std::string pct_text(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", round2(pct));
  return buf;
}

double percent(std::size_t part, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(total);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

char to_char(Category c) noexcept {
  switch (c) {
    case Category::Small: return 'S';
    case Category::Medium: return 'M';
    case Category::Large: return 'L';
  }
  return '?';
}

Category parse_category(const std::string& s) {
  if (s == "S") return Category::Small;
  if (s == "M") return Category::Medium;
  if (s == "L") return Category::Large;
  throw Error(Errc::InvalidArgument, "category must be S, M or L, got '" + s + "'");
}

double round2(double pct) noexcept { return std::round(pct * 100.0) / 100.0; }

double TallyRow::pct_correct() const noexcept { return percent(correct, total()); }
double TallyRow::pct_incorrect() const noexcept { return percent(incorrect, total()); }

std::vector<Judgment> parse_judgments(const std::string& jsonl) {
  std::vector<Judgment> out;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Judgment jd;
      jd.query_id = j.at("query_id").get<std::string>();
      jd.trial_index = j.at("trial").get<int>();
      jd.correct = j.at("correct").get<bool>();
      jd.category = parse_category(j.at("category").get<std::string>());
      if (jd.query_id.empty()) throw Error(Errc::InvalidArgument, "empty query_id");
      out.push_back(std::move(jd));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidArgument, "judgment line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) { return parse_judgments(read_text(path)); }

nlohmann::json to_json(const Judgment& j) {
  return {{"query_id", j.query_id},
          {"trial", j.trial_index},
          {"correct", j.correct},
          {"category", std::string(1, to_char(j.category))}};
}

void append_judgment(const std::filesystem::path& path, const Judgment& j) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for appending");
  out << to_json(j).dump() << '\n';
  if (!out) throw Error(Errc::IoFailure, "append to " + path.string() + " failed");
}

std::vector<ReportedRow> load_reported(const std::filesystem::path& path) {
  std::vector<ReportedRow> rows;
  try {
    const auto j = nlohmann::json::parse(read_text(path));
    for (const auto& r : j.at("rows")) {
      rows.push_back({r.at("query_id").get<std::string>(), r.at("correct").get<std::size_t>(),
                      r.at("incorrect").get<std::size_t>(), r.at("pct_correct").get<double>(),
                      r.at("pct_incorrect").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, path.string() + ": " + e.what());
  }
  return rows;
}

TallyReport tally(std::span<const Judgment> judgments, std::span<const ReportedRow> reported) {
  if (judgments.empty()) throw Error(Errc::EmptyJudgments, "nothing to tally");
  TallyReport report;
  std::map<std::string, std::size_t> slot;
  for (const auto& j : judgments) {
    const auto [it, inserted] = slot.try_emplace(j.query_id, report.rows.size());
    if (inserted) report.rows.push_back({j.query_id, j.category, 0, 0});
    auto& row = report.rows[it->second];
    if (row.category != j.category) {
      throw Error(Errc::InvalidArgument, "query " + j.query_id + " is recorded under two categories");
    }
    (j.correct ? row.correct : row.incorrect)++;
    (j.correct ? report.totals.correct : report.totals.incorrect)++;
  }
  report.totals.query_id = "Total";

  for (const auto& r : reported) {
    const auto total = r.correct + r.incorrect;
    const double own_correct = round2(percent(r.correct, total));
    const double own_incorrect = round2(percent(r.incorrect, total));
    if (std::abs(own_correct - round2(r.pct_correct)) > 0.005 ||
        std::abs(own_incorrect - round2(r.pct_incorrect)) > 0.005) {
      std::ostringstream d;
      d << "reported " << pct_text(r.pct_correct) << " / " << pct_text(r.pct_incorrect) << " but counts "
        << r.correct << " / " << r.incorrect << " give " << pct_text(own_correct) << " / "
        << pct_text(own_incorrect);
      report.discrepancies.push_back({r.query_id, d.str()});
    }
    const TallyRow* ours = nullptr;
    if (r.query_id == report.totals.query_id) {
      ours = &report.totals;
    } else if (const auto it = slot.find(r.query_id); it != slot.end()) {
      ours = &report.rows[it->second];
    }
    if (ours == nullptr) {
      report.discrepancies.push_back({r.query_id, "reported row has no judgments"});
    } else if (ours->correct != r.correct || ours->incorrect != r.incorrect) {
      std::ostringstream d;
      d << "reported counts " << r.correct << " / " << r.incorrect << " but judgments give " << ours->correct
        << " / " << ours->incorrect;
      report.discrepancies.push_back({r.query_id, d.str()});
    }
  }
  return report;
}

nlohmann::json to_json(const TallyReport& report) {
  const auto row_json = [](const TallyRow& r) {
    nlohmann::json j = {{"query_id", r.query_id},
                        {"correct", r.correct},
                        {"incorrect", r.incorrect},
                        {"total", r.total()},
                        {"pct_correct", round2(r.pct_correct())},
                        {"pct_incorrect", round2(r.pct_incorrect())}};
    if (r.category) j["category"] = std::string(1, to_char(*r.category));
    return j;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(row_json(r));
  nlohmann::json discrepancies = nlohmann::json::array();
  for (const auto& d : report.discrepancies) discrepancies.push_back({{"query_id", d.query_id}, {"detail", d.detail}});
  return {{"rows", std::move(rows)}, {"totals", row_json(report.totals)}, {"discrepancies", std::move(discrepancies)}};
}

std::string format_table(const TallyReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %-16s %-16s\n", "Query No.", "Correct", "Incorrect");
  out << buf;
  const auto line = [&](const TallyRow& r) {
    std::string name = r.query_id;
    if (r.category) name += std::string(" (") + to_char(*r.category) + ")";
    const auto c = std::to_string(r.correct) + " (" + pct_text(r.pct_correct()) + ")";
    const auto i = std::to_string(r.incorrect) + " (" + pct_text(r.pct_incorrect()) + ")";
    std::snprintf(buf, sizeof buf, "%-14s %-16s %-16s\n", name.c_str(), c.c_str(), i.c_str());
    out << buf;
  };
  for (const auto& r : report.rows) line(r);
  line(report.totals);
  for (const auto& d : report.discrepancies) out << "! " << d.query_id << ": " << d.detail << '\n';
  return out.str();
}

}  // namespace wayloc::nav
