#pragma once

#include <string>
#include <vector>

namespace jrefine::llm {

enum class Task { Comments, Identifiers };

// One-shot prompt: fixed instruction plus a worked example (input test ->
// exemplar output). Versioned so response fixtures stay stable.
struct PromptTemplate {
  Task task = Task::Comments;
  std::string version;
  std::string instruction;
  std::string example_input;
  std::string example_output;
};

// What the gateway needs to know about one purified test.
struct TestRenderContext {
  std::string class_name;
  std::string method_name;
  std::string source;               // rendered purified test method
  std::vector<std::string> locals;  // declared local names, source order
  std::string focal_context;        // optional extra code shown to the model
};

// Comments task: Arrange-Act-Assert exemplar, "return the annotated test".
PromptTemplate default_comment_template();
// Identifiers task: old -> new table exemplar with all-distinct new names.
PromptTemplate default_identifier_template();

// Renders the user message: worked example, then the test under work (class
// name, source in a ```java fence, identifier inventory), then — for retries —
// the list of already-used names to avoid.
std::string build_user_message(const PromptTemplate& tpl, const TestRenderContext& test,
                               const std::vector<std::string>& avoid_names);

}  // namespace jrefine::llm
