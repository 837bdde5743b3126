#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "veo/prompts.hpp"
#include "veo/raster.hpp"

namespace veo {

/// What the engine is asking for, in the labels shown in the images. Live
/// backends ignore it; the mock oracle answers from it.
struct OperatorTask {
  OperatorRole role = OperatorRole::init_intelligent;
  std::size_t k = 0;
  std::vector<std::string> parent_a;
  std::vector<std::string> parent_b;
  std::vector<std::string> current;
};

struct GatewayRequest {
  std::string system_prompt;
  std::string user_prompt;
  std::vector<Image> images;
  std::string model_id = "gpt-4o-2024-11-20";
  double temperature = 0.7;
  int max_tokens = 256;
  std::optional<OperatorTask> task;
};

struct TokenUsage {
  std::int64_t input = 0;
  std::int64_t output = 0;
};

struct GatewayResponse {
  std::string text;
  double latency_s = 0.0;
  std::optional<TokenUsage> usage;
  int attempts = 1;
};

/// Builds a request for `task` with the prompt pair of its role.
GatewayRequest make_request(const OperatorTask& task, std::vector<Image> images, const std::string& model_id,
                            double temperature = 0.7);

class VisionChatBackend {
 public:
  virtual ~VisionChatBackend() = default;
  /// Throws a GatewayError subclass on failure.
  virtual GatewayResponse complete(const GatewayRequest& request) = 0;
  virtual std::string name() const = 0;
};

struct GatewayOptions {
  int max_inflight = 4;
  /// Requests per second; 0 disables rate limiting.
  double requests_per_second = 0.0;
  /// JSONL transcript; empty disables it.
  std::filesystem::path transcript;
};

/// Thread-safe front end: bounds in-flight calls, rate-limits and writes a
/// transcript record (prompt hash, image hashes, raw reply, latency, usage)
/// per call.
class Gateway {
 public:
  Gateway(std::shared_ptr<VisionChatBackend> backend, GatewayOptions options = {});

  GatewayResponse complete_with_images(const GatewayRequest& request);

  const VisionChatBackend& backend() const { return *backend_; }
  std::uint64_t calls() const noexcept { return next_id_.load(); }

 private:
  void acquire_rate_token();
  void log(std::uint64_t id, const GatewayRequest& request, const GatewayResponse* response, const std::string& error,
           double latency_s);

  std::shared_ptr<VisionChatBackend> backend_;
  GatewayOptions options_;
  std::counting_semaphore<1024> inflight_;
  std::atomic<std::uint64_t> next_id_{0};
  std::mutex rate_mutex_;
  double tokens_ = 0.0;
  std::chrono::steady_clock::time_point last_refill_;
  std::mutex log_mutex_;
  std::ofstream transcript_;
};

}  // namespace veo
