#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jrefine/cli/config.hpp"
#include "jrefine/java/test_methods.hpp"
#include "jrefine/llm/prompts.hpp"
#include "jrefine/purify/purify.hpp"

namespace jrefine::cli {

// One purified test rendered and wrapped with its prompt context. Exposed so
// tests can precompute the exact requests the pipeline will issue (e.g. to
// stage canned provider responses).
struct PreparedTest {
  std::string name;    // <originalName>_<k>, k starting at 1
  std::string source;  // rendered purified method
  llm::TestRenderContext context;
  purify::PurifiedTest purified;
};

// Purifies one test method and renders every purified variant.
std::vector<PreparedTest> prepare_tests(const java::TestMethod& test,
                                        const java::RwConfig& rw, Diagnostics& diags);

struct PipelineResult {
  int exit_code = 0;  // 0 success/warnings, 2 config, 3 I/O
  nlohmann::ordered_json report;
  Diagnostics diags;  // run-fatal problems only; per-test ones live in the report
};

// End-to-end run: discover tests under the input paths, purify, annotate and
// rename via the provider, integrate with the preservation gate, write the
// refined tree plus report (and audit log) under the output directory.
PipelineResult run_pipeline(const RunConfig& config);

// Structural contract of the export bundle ({"tests": [...]}); returns false
// and fills `error` on the first violation.
bool validate_examples_bundle(const nlohmann::ordered_json& bundle,
                              std::string* error = nullptr);

}  // namespace jrefine::cli
