#include "jrefine/llm/gateway.hpp"

#include <chrono>

namespace jrefine::llm {

namespace {

class SlotGuard {
 public:
  SlotGuard(std::mutex& m, std::condition_variable& cv, int& free_slots)
      : mutex_(m), cv_(cv), free_slots_(free_slots) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return free_slots_ > 0; });
    --free_slots_;
  }

  ~SlotGuard() {
    {
      std::lock_guard lock(mutex_);
      ++free_slots_;
    }
    cv_.notify_one();
  }

  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::mutex& mutex_;
  std::condition_variable& cv_;
  int& free_slots_;
};

}  // namespace

Gateway::Gateway(std::unique_ptr<Provider> provider, ProviderConfig config)
    : provider_(std::move(provider)),
      config_(std::move(config)),
      comment_template_(default_comment_template()),
      identifier_template_(default_identifier_template()),
      free_slots_(config_.max_concurrent > 0 ? config_.max_concurrent : 1) {}

GatewayResult Gateway::generate_comments(const TestRenderContext& test) {
  return call(comment_template_, test, {});
}

GatewayResult Gateway::generate_identifiers(
    const TestRenderContext& test, const std::vector<std::string>& avoid_names) {
  return call(identifier_template_, test, avoid_names);
}

GatewayResult Gateway::call(const PromptTemplate& tpl, const TestRenderContext& test,
                            const std::vector<std::string>& avoid_names) {
  ChatRequest request;
  request.model = config_.model;
  request.system = tpl.instruction;
  request.user = build_user_message(tpl, test, avoid_names);
  request.temperature = config_.temperature;

  LlmExchange exchange;
  exchange.task = tpl.task == Task::Comments ? "comments" : "identifiers";
  exchange.provider_id = provider_->id();
  exchange.request_text = request.system + "\n\n" + request.user;

  GatewayResult result;
  auto started = std::chrono::steady_clock::now();
  try {
    SlotGuard slot(slots_mutex_, slots_cv_, free_slots_);
    ChatResponse response = provider_->complete(request);
    exchange.response_text = response.text;
    exchange.prompt_tokens = response.prompt_tokens;
    exchange.completion_tokens = response.completion_tokens;
    result.prompt_tokens = response.prompt_tokens;
    result.completion_tokens = response.completion_tokens;
    if (response.text.empty()) {
      add_diag(result.diags, DiagCode::ProviderBadResponse,
               "provider returned an empty response");
    } else {
      result.ok = true;
      result.text = response.text;
    }
  } catch (const ProviderError& e) {
    add_diag(result.diags, e.code, e.message);
  }
  exchange.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                started)
          .count();

  {
    std::lock_guard lock(audit_mutex_);
    audit_.push_back(std::move(exchange));
  }
  return result;
}

std::vector<LlmExchange> Gateway::audit_trail() const {
  std::lock_guard lock(audit_mutex_);
  return audit_;
}

}  // namespace jrefine::llm
