// Shared test fixtures: a multi-scenario matrix test (two assertions behind
// one setup block), a hallucinated rewrite of it that restructures code, and
// helpers for planting canned provider responses keyed exactly the way the
// mock provider looks them up.
#pragma once

#include <string>
#include <vector>

#include "jrefine/llm/prompts.hpp"
#include "jrefine/llm/provider.hpp"

namespace jrefine::testsupport {

// A JUnit test class whose single test method checks two scenarios: a column
// extraction and an out-of-range access.  Purification should split it in two.
const std::string& matrix_test_class();

// The same test's body as an LLM might rewrite it: renamed variables, new
// helper locals, Given/When/Then comments — i.e. restructured code that must
// not pass the preservation check.
const std::string& matrix_test_hallucinated();

// Writes `response` where the mock provider will find it for the request the
// gateway would build from (tpl, ctx, avoid_names) with `model`.  Returns the
// fixture filename.
std::string write_mock_fixture(const std::string& fixtures_dir,
                               const std::string& model,
                               const llm::PromptTemplate& tpl,
                               const llm::TestRenderContext& ctx,
                               const std::vector<std::string>& avoid_names,
                               const std::string& response);

}  // namespace jrefine::testsupport
