#include "veo/gateway.hpp"

#include <algorithm>
#include <thread>

#include "json.hpp"

#include "veo/error.hpp"
#include "veo/hashing.hpp"

namespace veo {

GatewayRequest make_request(const OperatorTask& task, std::vector<Image> images, const std::string& model_id,
                            double temperature) {
  auto prompts = prompt_for(task.role, task.k);
  GatewayRequest request;
  request.system_prompt = std::move(prompts.system_prompt);
  request.user_prompt = std::move(prompts.user_prompt);
  request.images = std::move(images);
  request.model_id = model_id;
  request.temperature = temperature;
  request.task = task;
  return request;
}

Gateway::Gateway(std::shared_ptr<VisionChatBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      inflight_(std::clamp(options_.max_inflight, 1, 1024)) {
  if (!backend_) throw ConfigError("gateway needs a backend");
  if (options_.max_inflight < 1) throw ConfigError("max_inflight must be at least 1");
  if (options_.requests_per_second < 0.0) throw ConfigError("requests_per_second must not be negative");
  tokens_ = std::max(1.0, options_.requests_per_second);
  last_refill_ = std::chrono::steady_clock::now();
  if (!options_.transcript.empty()) {
    if (options_.transcript.has_parent_path()) std::filesystem::create_directories(options_.transcript.parent_path());
    transcript_.open(options_.transcript, std::ios::app);
    if (!transcript_) throw Error("cannot open transcript '" + options_.transcript.string() + "'");
  }
}

void Gateway::acquire_rate_token() {
  const double rps = options_.requests_per_second;
  if (rps <= 0.0) return;
  const double burst = std::max(1.0, rps);
  for (;;) {
    std::chrono::duration<double> wait{0.0};
    {
      std::lock_guard lock(rate_mutex_);
      const auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(burst, tokens_ + std::chrono::duration<double>(now - last_refill_).count() * rps);
      last_refill_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rps);
    }
    std::this_thread::sleep_for(wait);
  }
}

GatewayResponse Gateway::complete_with_images(const GatewayRequest& request) {
  if (request.system_prompt.empty() || request.user_prompt.empty()) throw InputError("prompts must not be empty");
  const std::uint64_t id = next_id_.fetch_add(1);
  acquire_rate_token();
  inflight_.acquire();
  const auto start = std::chrono::steady_clock::now();
  try {
    auto response = backend_->complete(request);
    inflight_.release();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (response.latency_s <= 0.0) response.latency_s = elapsed;
    log(id, request, &response, {}, response.latency_s);
    return response;
  } catch (const std::exception& e) {
    inflight_.release();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log(id, request, nullptr, e.what(), elapsed);
    throw;
  }
}

void Gateway::log(std::uint64_t id, const GatewayRequest& request, const GatewayResponse* response,
                  const std::string& error, double latency_s) {
  if (!transcript_.is_open()) return;
  nlohmann::ordered_json j;
  j["id"] = id;
  j["backend"] = backend_->name();
  j["model"] = request.model_id;
  j["role"] = request.task ? to_string(request.task->role) : "";
  j["prompt_sha256"] = sha256_hex(request.system_prompt + "\n" + request.user_prompt);
  auto& hashes = j["image_sha256"] = nlohmann::json::array();
  for (const auto& img : request.images) hashes.push_back(sha256_hex(img.bytes()));
  j["latency_s"] = latency_s;
  if (response) {
    j["ok"] = true;
    j["response"] = response->text;
    j["attempts"] = response->attempts;
    if (response->usage) {
      j["usage"] = {{"input", response->usage->input}, {"output", response->usage->output}};
    } else {
      j["usage"] = nullptr;
    }
  } else {
    j["ok"] = false;
    j["error"] = error;
  }
  std::lock_guard lock(log_mutex_);
  transcript_ << j.dump() << '\n';
  transcript_.flush();
}

}  // namespace veo
