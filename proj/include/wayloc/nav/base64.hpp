#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wayloc::nav {

/// Standard alphabet with '=' padding.
[[nodiscard]] std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws InvalidArgument on characters outside the alphabet or bad padding.
[[nodiscard]] std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace wayloc::nav
