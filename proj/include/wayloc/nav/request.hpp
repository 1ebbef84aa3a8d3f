#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wayloc/embedding.hpp"
#include "wayloc/nav/prompt.hpp"

namespace wayloc::nav {

inline constexpr const char* kDefaultModel = "o3";

/// Everything sent with one navigation query.
struct NavRequest {
  WaypointLabel origin;          ///< from the localization session
  std::string destination;       ///< user-provided point of interest
  std::filesystem::path map_image;  ///< already-cropped floor plan
  std::string prompt;            ///< assembled system prompt
};

/// Throws MapNotFound, EmptyDestination, MissingSection.
[[nodiscard]] NavRequest build_nav_request(const WaypointLabel& origin, std::string destination,
                                           const std::filesystem::path& map_image, const SystemPromptSpec& spec);

/// "Navigate from <origin> to <destination>"
[[nodiscard]] std::string user_instruction(const std::string& origin, const std::string& destination);

/// Image MIME type guessed from the file extension.
[[nodiscard]] std::string image_mime_type(const std::filesystem::path& path);

/// Chat-completion body:
///
///   {"model": ..., "messages": [
///     {"role": "system", "content": <prompt>},
///     {"role": "user", "content": [
///       {"type": "text", "text": "Navigate from A to Room 2021"},
///       {"type": "image_url", "image_url": {"url": "data:<mime>;base64,<bytes>"}}]}]}
///
/// Throws MapNotFound if the image cannot be read.
[[nodiscard]] nlohmann::json to_chat_payload(const NavRequest& request, const std::string& model = kDefaultModel);

/// The four request elements recovered from a payload.
struct ParsedPayload {
  std::string model;
  std::string system_prompt;
  std::string origin;
  std::string destination;
  std::string image_mime;
  std::vector<std::uint8_t> image_bytes;
};

/// Inverse of to_chat_payload. The origin is the text up to the first " to ".
/// Throws InvalidArgument if the payload does not have that shape.
[[nodiscard]] ParsedPayload parse_chat_payload(const nlohmann::json& payload);

}  // namespace wayloc::nav
