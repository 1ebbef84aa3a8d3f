#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wayloc::nav {

/// The three parts of the navigation system prompt.
struct SystemPromptSpec {
  std::string initial_context;
  std::vector<std::string> core_rules;
  std::string walkable_path_context;

  friend bool operator==(const SystemPromptSpec&, const SystemPromptSpec&) = default;
};

/// Parses the sectioned text format:
///
///   [initial]
///   free text ...
///   [rules]
///   one rule per line ("-", "*", "1." and "1)" markers are stripped)
///   [walkable]
///   free text ...
///
/// Throws InvalidArgument on unknown or repeated headers, or text before the
/// first header.
[[nodiscard]] SystemPromptSpec parse_prompt_spec(std::string_view text);
[[nodiscard]] SystemPromptSpec load_prompt_spec(const std::filesystem::path& path);

/// Initial Context, then numbered Core Rules, then Walkable Path Context, under
/// fixed headers. Throws MissingSection if any part is empty.
[[nodiscard]] std::string assemble_system_prompt(const SystemPromptSpec& spec);

}  // namespace wayloc::nav
