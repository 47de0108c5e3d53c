#include "jrefine/cli/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace jrefine::cli {

namespace {

using nlohmann::json;

bool read_object(const json& obj, const char* context,
                 const std::vector<std::pair<std::string, void (*)(const json&, RunConfig&)>>& keys,
                 RunConfig& config, Diagnostics& diags) {
  bool ok = true;
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto& [name, apply] : keys) {
      if (key == name) {
        apply(value, config);
        known = true;
        break;
      }
    }
    if (!known) {
      add_diag(diags, DiagCode::ConfigError,
               std::string("unknown config key: ") + context + key);
      ok = false;
    }
  }
  return ok;
}

}  // namespace

bool load_config_file(const std::string& path, RunConfig& config, Diagnostics& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    add_diag(diags, DiagCode::ConfigError, "cannot open config file: " + path);
    return false;
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    add_diag(diags, DiagCode::ConfigError, "config file is not a JSON object: " + path);
    return false;
  }

  try {
    static const std::vector<std::pair<std::string, void (*)(const json&, RunConfig&)>>
        top = {
            {"inputs", [](const json& v, RunConfig& c) { c.inputs = v.get<std::vector<std::string>>(); }},
            {"out", [](const json& v, RunConfig& c) { c.out_dir = v.get<std::string>(); }},
            {"threshold", [](const json& v, RunConfig& c) { c.threshold = v.get<double>(); }},
            {"workers", [](const json& v, RunConfig& c) { c.workers = v.get<int>(); }},
            {"offline", [](const json& v, RunConfig& c) { c.offline = v.get<bool>(); }},
            {"serial", [](const json& v, RunConfig& c) { c.serial = v.get<bool>(); }},
            {"compile_cmd", [](const json& v, RunConfig& c) { c.compile_cmd = v.get<std::string>(); }},
            {"report", [](const json& v, RunConfig& c) { c.report_path = v.get<std::string>(); }},
            {"export_examples", [](const json& v, RunConfig& c) { c.export_examples_path = v.get<std::string>(); }},
            {"modification_keywords", [](const json& v, RunConfig& c) { c.rw.modification_keywords = v.get<std::vector<std::string>>(); }},
            {"provider", [](const json&, RunConfig&) {}},
            {"codebleu", [](const json&, RunConfig&) {}},
        };
    if (!read_object(doc, "", top, config, diags)) return false;

    if (doc.contains("provider")) {
      static const std::vector<std::pair<std::string, void (*)(const json&, RunConfig&)>>
          provider = {
              {"endpoint", [](const json& v, RunConfig& c) { c.provider.endpoint = v.get<std::string>(); }},
              {"model", [](const json& v, RunConfig& c) { c.provider.model = v.get<std::string>(); }},
              {"credential_env", [](const json& v, RunConfig& c) { c.provider.credential_env = v.get<std::string>(); }},
              {"temperature", [](const json& v, RunConfig& c) { c.provider.temperature = v.get<double>(); }},
              {"max_retries", [](const json& v, RunConfig& c) { c.provider.max_retries = v.get<int>(); }},
              {"timeout_ms", [](const json& v, RunConfig& c) { c.provider.timeout = std::chrono::milliseconds(v.get<long>()); }},
              {"max_concurrent", [](const json& v, RunConfig& c) { c.provider.max_concurrent = v.get<int>(); }},
              {"fixtures_dir", [](const json& v, RunConfig& c) { c.provider.fixtures_dir = v.get<std::string>(); }},
          };
      if (!read_object(doc["provider"], "provider.", provider, config, diags))
        return false;
    }

    if (doc.contains("codebleu")) {
      static const std::vector<std::pair<std::string, void (*)(const json&, RunConfig&)>>
          weights = {
              {"alpha", [](const json& v, RunConfig& c) { c.codebleu.alpha = v.get<double>(); }},
              {"beta", [](const json& v, RunConfig& c) { c.codebleu.beta = v.get<double>(); }},
              {"gamma", [](const json& v, RunConfig& c) { c.codebleu.gamma = v.get<double>(); }},
              {"delta", [](const json& v, RunConfig& c) { c.codebleu.delta = v.get<double>(); }},
              {"max_ngram", [](const json& v, RunConfig& c) { c.codebleu.max_ngram = v.get<int>(); }},
              {"keyword_weight", [](const json& v, RunConfig& c) { c.codebleu.keyword_weight = v.get<double>(); }},
          };
      if (!read_object(doc["codebleu"], "codebleu.", weights, config, diags))
        return false;
    }
  } catch (const json::exception& e) {
    add_diag(diags, DiagCode::ConfigError,
             std::string("config value has the wrong type: ") + e.what());
    return false;
  }
  return true;
}

bool validate_config(const RunConfig& config, Diagnostics& diags) {
  bool ok = true;
  auto fail = [&](const std::string& message) {
    add_diag(diags, DiagCode::ConfigError, message);
    ok = false;
  };
  if (!(config.threshold > 0.0 && config.threshold < 1.0))
    fail("threshold must lie strictly between 0 and 1");
  if (config.workers < 1) fail("workers must be >= 1");
  if (config.provider.temperature < 0) fail("temperature must be >= 0");
  if (config.provider.max_retries < 0) fail("max_retries must be >= 0");
  if (config.provider.max_concurrent < 1) fail("max_concurrent must be >= 1");
  double sum = config.codebleu.alpha + config.codebleu.beta + config.codebleu.gamma +
               config.codebleu.delta;
  if (std::fabs(sum - 1.0) > 1e-9) fail("similarity weights must sum to 1");
  if (config.codebleu.max_ngram < 1) fail("max_ngram must be >= 1");
  if (!config.offline && config.provider.endpoint.empty())
    fail("online mode needs a provider endpoint (or pass --offline)");
  if (config.out_dir.empty()) fail("an output directory is required");
  return ok;
}

}  // namespace jrefine::cli
