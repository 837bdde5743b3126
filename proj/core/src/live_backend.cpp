#include "veo/live_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "veo/error.hpp"
#include "veo/hashing.hpp"

namespace veo {

std::optional<std::string> find_api_key(const LiveConfig& config) {
  for (const std::string& name : {config.api_key_env, std::string("OPENAI_API_KEY")}) {
    if (name.empty()) continue;
    if (const char* value = std::getenv(name.c_str()); value && *value) return std::string(value);
  }
  return std::nullopt;
}

std::string build_chat_payload(const GatewayRequest& request, const LiveConfig& config) {
  nlohmann::ordered_json user_content = nlohmann::json::array();
  user_content.push_back({{"type", "text"}, {"text", request.user_prompt}});
  for (const auto& img : request.images) {
    const auto png = encode_png(img);
    if (png.size() > config.max_image_bytes) {
      throw InputError("image of " + std::to_string(png.size()) + " bytes exceeds the " +
                       std::to_string(config.max_image_bytes) + "-byte limit");
    }
    user_content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
  }
  nlohmann::ordered_json body;
  body["model"] = request.model_id.empty() ? config.model_id : request.model_id;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  body["messages"] = nlohmann::json::array({
      {{"role", "system"}, {"content", request.system_prompt}},
      {{"role", "user"}, {"content", user_content}},
  });
  return body.dump();
}

GatewayResponse parse_chat_response(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw GatewayError("backend reply is not JSON");
  GatewayResponse out;
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw GatewayError("backend reply has no text content");
    out.text = content.get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
      const auto& u = j["usage"];
      out.usage = TokenUsage{u.value("prompt_tokens", std::int64_t{0}), u.value("completion_tokens", std::int64_t{0})};
    }
  } catch (const nlohmann::json::exception& e) {
    throw GatewayError(std::string("unexpected backend reply shape: ") + e.what());
  }
  return out;
}

LiveBackend::LiveBackend(LiveConfig config) : config_(std::move(config)) {
  if (config_.max_retries < 0) throw ConfigError("max_retries must not be negative");
  if (!(config_.timeout_s > 0.0)) throw ConfigError("timeout_s must be positive");
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base_url needs a scheme: '" + config_.base_url + "'");
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  origin_ = config_.base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/chat/completions";
}

GatewayResponse LiveBackend::complete(const GatewayRequest& request) {
  const auto key = find_api_key(config_);
  if (!key) throw CredentialError("no API key: set " + config_.api_key_env + " or OPENAI_API_KEY");
  const std::string payload = build_chat_payload(request, config_);

  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout_s));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Headers headers{{"Authorization", "Bearer " + *key}};

  const auto start = std::chrono::steady_clock::now();
  double backoff = config_.backoff_initial_s;
  std::string last_error;
  const int attempts_allowed = config_.max_retries + 1;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      auto out = parse_chat_response(res->body);
      out.attempts = attempt;
      out.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    } else if (res->status == 401 || res->status == 403) {
      throw CredentialError("backend rejected credentials (HTTP " + std::to_string(res->status) + ")");
    } else if (res->status == 408 || res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw GatewayError("backend refused the request (HTTP " + std::to_string(res->status) + "): " +
                         res->body.substr(0, 500));
    }
    if (attempt < attempts_allowed) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff = std::min(backoff * 2.0, config_.backoff_max_s);
    }
  }
  throw TransportError("gave up after " + std::to_string(attempts_allowed) + " attempts (" + last_error + ")",
                       attempts_allowed);
}

}  // namespace veo
