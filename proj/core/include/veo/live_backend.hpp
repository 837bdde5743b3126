#pragma once

#include <optional>
#include <string>

#include "veo/gateway.hpp"

namespace veo {

struct LiveConfig {
  /// Scheme, host, optional port and path prefix; `/chat/completions` is appended.
  std::string base_url = "https://api.openai.com/v1";
  std::string model_id = "gpt-4o-2024-11-20";
  double timeout_s = 60.0;
  int max_retries = 3;
  double backoff_initial_s = 1.0;
  double backoff_max_s = 30.0;
  std::size_t max_image_bytes = 20u << 20;
  /// Checked first; OPENAI_API_KEY is the fallback.
  std::string api_key_env = "VEO_API_KEY";
};

/// API key from the environment, if any.
std::optional<std::string> find_api_key(const LiveConfig& config);

/// OpenAI-style chat-completions JSON body with PNG data-URL image parts.
/// Throws InputError when an encoded image exceeds `max_image_bytes`.
std::string build_chat_payload(const GatewayRequest& request, const LiveConfig& config);

/// Extracts the reply text and token usage. Throws GatewayError on a
/// malformed body.
GatewayResponse parse_chat_response(const std::string& body);

/// HTTP client for OpenAI-compatible vision chat endpoints. Retries with
/// exponential backoff on connection errors, 408, 429 and 5xx; never on other
/// 4xx. 401 and 403 raise CredentialError.
class LiveBackend final : public VisionChatBackend {
 public:
  explicit LiveBackend(LiveConfig config);

  GatewayResponse complete(const GatewayRequest& request) override;
  std::string name() const override { return "live"; }

 private:
  LiveConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace veo
