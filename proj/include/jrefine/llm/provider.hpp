#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "jrefine/diagnostics.hpp"

namespace jrefine::llm {

struct ProviderConfig {
  std::string endpoint;        // chat-completion URL, e.g. https://host/v1/chat/completions
  std::string model = "default-model";
  std::string credential_env;  // NAME of the env var holding the API key
  double temperature = 0.0;
  int max_retries = 3;         // duplicate-identifier retries
  std::chrono::milliseconds timeout{30000};
  int max_concurrent = 4;
  std::string fixtures_dir;    // mock provider: canned responses, one file per request hash
};

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.0;
};

struct ChatResponse {
  std::string text;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

// Thrown by providers; the gateway converts these into per-test diagnostics.
struct ProviderError {
  DiagCode code;
  std::string message;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Offline deterministic provider. Looks for a canned response file named
// mock_request_filename(request) under fixtures_dir; otherwise synthesizes a
// deterministic response (echo-with-comments, or an old -> new name table).
std::unique_ptr<Provider> make_mock_provider(const ProviderConfig& config);

// HTTPS/HTTP chat-completion provider (single system+user message pair).
// Reads the credential from the environment variable named in the config —
// never from files.
std::unique_ptr<Provider> make_http_provider(const ProviderConfig& config);

// Stable fixture filename for a request: FNV-1a-64 hex of its serialized
// form + ".txt". Exposed so tests can write fixtures without hardcoding hashes.
std::string mock_request_filename(const ChatRequest& request);

}  // namespace jrefine::llm
