#include "wayloc/nav/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "wayloc/error.hpp"

namespace wayloc::nav {

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string strip_list_marker(std::string_view line) {
  line = trim(line);
  if (!line.empty() && (line.front() == '-' || line.front() == '*')) {
    line.remove_prefix(1);
  } else {
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
    if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
      line.remove_prefix(digits + 1);
    }
  }
  return std::string(trim(line));
}

std::string join_block(const std::vector<std::string>& lines) {
  std::size_t first = 0;
  std::size_t last = lines.size();
  while (first < last && blank(lines[first])) ++first;
  while (last > first && blank(lines[last - 1])) --last;
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out += '\n';
    std::string_view l = lines[i];
    while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.remove_suffix(1);
    out += l;
  }
  return out;
}

}  // namespace

SystemPromptSpec parse_prompt_spec(std::string_view text) {
  enum class Section { None, Initial, Rules, Walkable };
  Section current = Section::None;
  bool seen[4] = {true, false, false, false};
  std::vector<std::string> initial;
  std::vector<std::string> walkable;
  SystemPromptSpec spec;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      const auto name = t.substr(1, t.size() - 2);
      Section next = Section::None;
      if (name == "initial") next = Section::Initial;
      else if (name == "rules") next = Section::Rules;
      else if (name == "walkable") next = Section::Walkable;
      else throw Error(Errc::InvalidArgument, "unknown prompt section [" + std::string(name) + "]");
      auto& flag = seen[static_cast<int>(next)];
      if (flag) throw Error(Errc::InvalidArgument, "prompt section [" + std::string(name) + "] repeated");
      flag = true;
      current = next;
      continue;
    }
    switch (current) {
      case Section::None:
        if (!blank(line)) throw Error(Errc::InvalidArgument, "text before the first prompt section header");
        break;
      case Section::Initial: initial.push_back(line); break;
      case Section::Walkable: walkable.push_back(line); break;
      case Section::Rules:
        if (!blank(line)) spec.core_rules.push_back(strip_list_marker(line));
        break;
    }
  }
  spec.initial_context = join_block(initial);
  spec.walkable_path_context = join_block(walkable);
  return spec;
}

SystemPromptSpec load_prompt_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_prompt_spec(buf.str());
}

std::string assemble_system_prompt(const SystemPromptSpec& spec) {
  if (blank(spec.initial_context)) throw Error(Errc::MissingSection, "initial context is empty");
  if (spec.core_rules.empty()) throw Error(Errc::MissingSection, "core rules are empty");
  for (const auto& rule : spec.core_rules) {
    if (blank(rule)) throw Error(Errc::MissingSection, "a core rule is empty");
  }
  if (blank(spec.walkable_path_context)) throw Error(Errc::MissingSection, "walkable path context is empty");

  std::string out;
  out += "# Initial Context\n";
  out += spec.initial_context;
  out += "\n\n# Core Rules\n";
  for (std::size_t i = 0; i < spec.core_rules.size(); ++i) {
    out += std::to_string(i + 1) + ". " + spec.core_rules[i] + "\n";
  }
  out += "\n# Walkable Path Context\n";
  out += spec.walkable_path_context;
  out += "\n";
  return out;
}

}  // namespace wayloc::nav
