#include "wayloc/nav/gateway.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "wayloc/error.hpp"

namespace wayloc::nav {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace

MockGateway::MockGateway(std::filesystem::path dir) : dir_(std::move(dir)) {}

GatewayReply MockGateway::complete(const nlohmann::json& payload, std::chrono::seconds /*timeout*/) {
  last_payload_ = payload;
  if (auto body = slurp(dir_ / "response.json")) {
    return {parse_completion_content(*body), *body};
  }
  if (auto text = slurp(dir_ / "response.txt")) {
    if (text->empty()) throw Error(Errc::MalformedResponse, "canned response is empty");
    return {*text, *text};
  }
  throw Error(Errc::IoFailure, "mock directory " + dir_.string() + " has no response.json or response.txt");
}

HttpGateway::HttpGateway(std::string endpoint, std::string api_key) : api_key_(std::move(api_key)) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::InvalidArgument, "endpoint needs a scheme: " + endpoint);
  const auto scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(Errc::InvalidArgument, "endpoint scheme must be http or https: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  origin_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  if (origin_.size() <= scheme_end + 3) throw Error(Errc::InvalidArgument, "endpoint has no host: " + endpoint);
}

GatewayReply HttpGateway::complete(const nlohmann::json& payload, std::chrono::seconds timeout) {
  std::unique_ptr<httplib::Client> client;
  try {
    client = std::make_unique<httplib::Client>(origin_);
  } catch (const std::exception& e) {
    throw Error(Errc::HttpFailure, std::string("cannot create client for ") + origin_ + ": " + e.what());
  }
  if (!client->is_valid()) throw Error(Errc::HttpFailure, "unsupported endpoint " + origin_);
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto started = std::chrono::steady_clock::now();
  auto res = client->Post(path_, headers, payload.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    // A read that runs out the clock surfaces as Error::Read.
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= timeout)) {
      throw Error(Errc::Timeout, "no response from " + origin_ + " within " + std::to_string(timeout.count()) + " s");
    }
    throw Error(Errc::HttpFailure, origin_ + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(Errc::HttpFailure, origin_ + path_ + " answered HTTP " + std::to_string(res->status));
  }
  return {parse_completion_content(res->body), res->body};
}

std::string parse_completion_content(const std::string& body) {
  if (body.empty()) throw Error(Errc::MalformedResponse, "empty response body");
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::MalformedResponse, "response body is not JSON");
  const auto ptr = nlohmann::json::json_pointer("/choices/0/message/content");
  if (!j.contains(ptr)) throw Error(Errc::MalformedResponse, "response has no choices[0].message.content");
  const auto& content = j.at(ptr);
  std::string text;
  if (content.is_string()) {
    text = content.get<std::string>();
  } else if (content.is_array()) {
    for (const auto& part : content) {
      if (part.is_object() && part.value("type", "") == "text") text += part.value("text", "");
    }
  } else {
    throw Error(Errc::MalformedResponse, "message content is neither text nor parts");
  }
  if (text.empty()) throw Error(Errc::MalformedResponse, "message content is empty");
  return text;
}

std::vector<std::string> split_steps(const std::string& content) {
  std::vector<std::string> steps;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    steps.push_back(line);
  }
  return steps;
}

InstructionSet request_instructions(NavGateway& gateway, const NavRequest& request, std::chrono::seconds timeout,
                                    const std::string& model) {
  InstructionSet set;
  set.payload = to_chat_payload(request, model);
  auto reply = gateway.complete(set.payload, timeout);
  set.steps = split_steps(reply.content);
  if (set.steps.empty()) throw Error(Errc::MalformedResponse, "reply contains no instruction steps");
  set.raw_response = std::move(reply.raw);
  return set;
}

void archive_instructions(const InstructionSet& set, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "raw_response.txt", set.raw_response);
  write_text(dir / "steps.json", nlohmann::json(set.steps).dump(2) + "\n");
  write_text(dir / "request.json", set.payload.dump(2) + "\n");
}

}  // namespace wayloc::nav
