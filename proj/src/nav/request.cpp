#include "wayloc/nav/request.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "wayloc/error.hpp"
#include "wayloc/nav/base64.hpp"

namespace wayloc::nav {

namespace {

constexpr std::string_view kInstructionPrefix = "Navigate from ";
constexpr std::string_view kInstructionJoin = " to ";

std::vector<std::uint8_t> read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MapNotFound, "cannot read map image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::InvalidArgument, "not a navigation payload: " + what);
}

}  // namespace

NavRequest build_nav_request(const WaypointLabel& origin, std::string destination,
                             const std::filesystem::path& map_image, const SystemPromptSpec& spec) {
  if (std::all_of(destination.begin(), destination.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw Error(Errc::EmptyDestination, "destination must not be empty");
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(map_image, ec)) {
    throw Error(Errc::MapNotFound, "map image " + map_image.string() + " does not exist");
  }
  return {origin, std::move(destination), map_image, assemble_system_prompt(spec)};
}

std::string user_instruction(const std::string& origin, const std::string& destination) {
  return std::string(kInstructionPrefix) + origin + std::string(kInstructionJoin) + destination;
}

std::string image_mime_type(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".webp") return "image/webp";
  if (ext == ".gif") return "image/gif";
  return "application/octet-stream";
}

nlohmann::json to_chat_payload(const NavRequest& request, const std::string& model) {
  const auto image = read_image(request.map_image);
  const std::string url = "data:" + image_mime_type(request.map_image) + ";base64," + base64_encode(image);
  nlohmann::json user_content = nlohmann::json::array();
  user_content.push_back({{"type", "text"}, {"text", user_instruction(request.origin.str(), request.destination)}});
  user_content.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
  return {{"model", model},
          {"messages",
           {{{"role", "system"}, {"content", request.prompt}}, {{"role", "user"}, {"content", user_content}}}}};
}

ParsedPayload parse_chat_payload(const nlohmann::json& payload) {
  ParsedPayload out;
  if (!payload.is_object() || !payload.contains("messages") || !payload["messages"].is_array()) {
    malformed("missing messages array");
  }
  out.model = payload.value("model", "");
  bool have_text = false;
  bool have_image = false;
  bool have_system = false;
  for (const auto& msg : payload["messages"]) {
    const auto role = msg.value("role", "");
    if (role == "system" && msg.contains("content") && msg["content"].is_string()) {
      out.system_prompt = msg["content"].get<std::string>();
      have_system = true;
    } else if (role == "user" && msg.contains("content") && msg["content"].is_array()) {
      for (const auto& part : msg["content"]) {
        const auto type = part.value("type", "");
        if (type == "text") {
          const auto text = part.value("text", "");
          if (text.rfind(kInstructionPrefix, 0) != 0) malformed("user text does not start with 'Navigate from'");
          const auto rest = text.substr(kInstructionPrefix.size());
          const auto join = rest.find(kInstructionJoin);
          if (join == std::string::npos) malformed("user text lacks ' to '");
          out.origin = rest.substr(0, join);
          out.destination = rest.substr(join + kInstructionJoin.size());
          have_text = true;
        } else if (type == "image_url") {
          const std::string url = part.value(nlohmann::json::json_pointer("/image_url/url"), std::string{});
          const auto comma = url.find(";base64,");
          if (url.rfind("data:", 0) != 0 || comma == std::string::npos) malformed("image is not a base64 data URL");
          out.image_mime = url.substr(5, comma - 5);
          out.image_bytes = base64_decode(std::string_view(url).substr(comma + 8));
          have_image = true;
        }
      }
    }
  }
  if (!have_system) malformed("no system message");
  if (!have_text) malformed("no user instruction");
  if (!have_image) malformed("no map image");
  return out;
}

}  // namespace wayloc::nav
