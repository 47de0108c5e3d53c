#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "jrefine/diagnostics.hpp"
#include "jrefine/llm/prompts.hpp"
#include "jrefine/llm/provider.hpp"

namespace jrefine::llm {

// One provider call, recorded verbatim for the audit log.
struct LlmExchange {
  std::string task;        // "comments" | "identifiers"
  std::string provider_id;
  std::string request_text;   // system + user, as sent
  std::string response_text;  // raw, unedited
  double latency_ms = 0.0;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct GatewayResult {
  bool ok = false;
  std::string text;  // raw model output; empty when !ok
  int prompt_tokens = 0;
  int completion_tokens = 0;
  Diagnostics diags;
};

// Thread-safe front door to the provider: builds the one-shot prompts, holds
// the concurrency-limit semaphore, and records every call in the audit trail.
class Gateway {
 public:
  Gateway(std::unique_ptr<Provider> provider, ProviderConfig config);

  // Full annotated rewrite of the test (raw model text, no local editing).
  GatewayResult generate_comments(const TestRenderContext& test);

  // Raw identifier-mapping text. `avoid_names` is non-empty on duplicate
  // retries: the prompt then instructs the model not to reuse those names.
  GatewayResult generate_identifiers(const TestRenderContext& test,
                                     const std::vector<std::string>& avoid_names = {});

  const ProviderConfig& config() const { return config_; }
  std::string provider_id() const { return provider_->id(); }

  // Snapshot of all exchanges so far, in completion order.
  std::vector<LlmExchange> audit_trail() const;

 private:
  GatewayResult call(const PromptTemplate& tpl, const TestRenderContext& test,
                     const std::vector<std::string>& avoid_names);

  std::unique_ptr<Provider> provider_;
  ProviderConfig config_;
  PromptTemplate comment_template_;
  PromptTemplate identifier_template_;

  // Counting semaphore bounding in-flight provider calls.
  mutable std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int free_slots_;

  mutable std::mutex audit_mutex_;
  std::vector<LlmExchange> audit_;
};

}  // namespace jrefine::llm
