#include <cstdlib>
#include <string>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "jrefine/llm/provider.hpp"

namespace jrefine::llm {

namespace {

struct ParsedUrl {
  bool https = false;
  std::string host;
  int port = 0;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest;
  if (url.rfind("https://", 0) == 0) {
    out.https = true;
    rest = url.substr(8);
  } else if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else {
    throw ProviderError{DiagCode::ConfigError,
                        "endpoint must start with http:// or https://: " + url};
  }
  std::size_t slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  std::size_t colon = authority.find(':');
  if (colon == std::string::npos) {
    out.host = authority;
    out.port = out.https ? 443 : 80;
  } else {
    out.host = authority.substr(0, colon);
    out.port = std::stoi(authority.substr(colon + 1));
  }
  if (out.host.empty())
    throw ProviderError{DiagCode::ConfigError, "endpoint has no host: " + url};
  return out;
}

class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config) : config_(std::move(config)) {}

  std::string id() const override { return "http"; }

  ChatResponse complete(const ChatRequest& request) override {
    ParsedUrl url = parse_url(config_.endpoint);

    nlohmann::json body = {
        {"model", request.model},
        {"temperature", request.temperature},
        {"messages",
         {{{"role", "system"}, {"content", request.system}},
          {{"role", "user"}, {"content", request.user}}}},
    };

    httplib::Headers headers;
    if (!config_.credential_env.empty()) {
      const char* key = std::getenv(config_.credential_env.c_str());
      if (!key || !*key)
        throw ProviderError{DiagCode::ProviderUnavailable,
                            "credential environment variable not set: " +
                                config_.credential_env};
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto seconds = static_cast<time_t>(config_.timeout.count() / 1000);
    auto micros = static_cast<time_t>(config_.timeout.count() % 1000 * 1000);
    httplib::Result res;
    if (url.https) {
      httplib::SSLClient client(url.host, url.port);
      client.set_connection_timeout(seconds, micros);
      client.set_read_timeout(seconds, micros);
      res = client.Post(url.path, headers, body.dump(), "application/json");
    } else {
      httplib::Client client(url.host, url.port);
      client.set_connection_timeout(seconds, micros);
      client.set_read_timeout(seconds, micros);
      res = client.Post(url.path, headers, body.dump(), "application/json");
    }

    if (!res) {
      auto err = res.error();
      DiagCode code = (err == httplib::Error::ConnectionTimeout ||
                       err == httplib::Error::Read || err == httplib::Error::Write)
                          ? DiagCode::ProviderTimeout
                          : DiagCode::ProviderUnavailable;
      throw ProviderError{code, "request failed: " + httplib::to_string(err)};
    }
    if (res->status < 200 || res->status >= 300)
      throw ProviderError{DiagCode::ProviderUnavailable,
                          "provider returned HTTP " + std::to_string(res->status)};

    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded())
      throw ProviderError{DiagCode::ProviderBadResponse,
                          "provider reply is not valid JSON"};

    ChatResponse out;
    try {
      out.text = reply.at("choices").at(0).at("message").at("content")
                     .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError{DiagCode::ProviderBadResponse,
                          std::string("unexpected reply shape: ") + e.what()};
    }
    if (reply.contains("usage")) {
      out.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
      out.completion_tokens = reply["usage"].value("completion_tokens", 0);
    }
    return out;
  }

 private:
  ProviderConfig config_;
};

}  // namespace

std::unique_ptr<Provider> make_http_provider(const ProviderConfig& config) {
  return std::make_unique<HttpProvider>(config);
}

}  // namespace jrefine::llm
