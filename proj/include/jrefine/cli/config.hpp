#pragma once

#include <string>
#include <vector>

#include "jrefine/diagnostics.hpp"
#include "jrefine/java/rw.hpp"
#include "jrefine/llm/provider.hpp"
#include "jrefine/similarity/codebleu.hpp"

namespace jrefine::cli {

struct RunConfig {
  std::vector<std::string> inputs;  // .java files or directories
  std::string out_dir;
  llm::ProviderConfig provider;
  sim::CodeBleuConfig codebleu;
  java::RwConfig rw;
  double threshold = 0.7;  // comment-anchor acceptance, strict >
  int workers = 4;
  bool offline = false;  // mock provider with fixtures instead of HTTP
  bool serial = false;   // single-threaded reference path
  std::string compile_cmd;           // external check, {} replaced by the file
  std::string report_path;           // default: <out_dir>/report.json
  std::string export_examples_path;  // empty: no bundle
};

// Overlays values from a JSON config file onto `config`. Returns false (with
// diagnostics) when the file is unreadable, not JSON, or has unknown keys.
bool load_config_file(const std::string& path, RunConfig& config, Diagnostics& diags);

// Range/invariant checks: threshold in (0,1), workers >= 1, similarity
// weights summing to 1, retries >= 0, an endpoint when online.
bool validate_config(const RunConfig& config, Diagnostics& diags);

}  // namespace jrefine::cli
