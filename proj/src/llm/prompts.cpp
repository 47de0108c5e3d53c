#include "jrefine/llm/prompts.hpp"

namespace jrefine::llm {

PromptTemplate default_comment_template() {
  PromptTemplate t;
  t.task = Task::Comments;
  t.version = "comments-v1";
  t.instruction =
      "You improve the readability of Java unit tests by adding comments.\n"
      "Add a short doc comment above the test method and inline // comments\n"
      "that follow the Arrange-Act-Assert pattern. Do not modify, add,\n"
      "remove, or reorder any code. Reply with only the annotated test\n"
      "inside a ```java code fence.";
  t.example_input =
      "@Test\n"
      "public void testPop() {\n"
      "    Stack<Integer> s = new Stack<>();\n"
      "    s.push(42);\n"
      "    int top = s.pop();\n"
      "    assertEquals(42, top);\n"
      "}";
  t.example_output =
      "```java\n"
      "/**\n"
      " * Verifies that popping returns the most recently pushed element.\n"
      " */\n"
      "@Test\n"
      "public void testPop() {\n"
      "    // Arrange: create a stack holding one element.\n"
      "    Stack<Integer> s = new Stack<>();\n"
      "    s.push(42);\n"
      "    // Act: pop the top element.\n"
      "    int top = s.pop();\n"
      "    // Assert: the popped value is the pushed one.\n"
      "    assertEquals(42, top);\n"
      "}\n"
      "```";
  return t;
}

PromptTemplate default_identifier_template() {
  PromptTemplate t;
  t.task = Task::Identifiers;
  t.version = "identifiers-v1";
  t.instruction =
      "You improve the readability of Java unit tests by renaming identifiers.\n"
      "Propose a clearer, intention-revealing name for each listed identifier\n"
      "(local variables and the test method name). Every new name must be a\n"
      "valid Java identifier, must not appear anywhere in the test already,\n"
      "and all new names must be distinct from each other. Reply with one\n"
      "line per identifier in the form: old -> new";
  t.example_input =
      "@Test\n"
      "public void testPop() {\n"
      "    Stack<Integer> s = new Stack<>();\n"
      "    s.push(42);\n"
      "    int top = s.pop();\n"
      "    assertEquals(42, top);\n"
      "}\n"
      "Local variables: s, top\n"
      "Test name: testPop";
  t.example_output =
      "s -> stackUnderTest\n"
      "top -> poppedValue\n"
      "testPop -> testPopReturnsMostRecentlyPushedElement";
  return t;
}

std::string build_user_message(const PromptTemplate& tpl, const TestRenderContext& test,
                               const std::vector<std::string>& avoid_names) {
  std::string msg;
  msg += "Example input:\n```java\n" + tpl.example_input + "\n```\n";
  msg += "Example output:\n" + tpl.example_output + "\n\n";
  msg += "Class: " + test.class_name + "\n";
  if (!test.focal_context.empty())
    msg += "Context:\n```java\n" + test.focal_context + "\n```\n";
  msg += "Test:\n```java\n" + test.source + "\n```\n";
  if (tpl.task == Task::Identifiers) {
    msg += "Local variables: ";
    for (std::size_t i = 0; i < test.locals.size(); ++i) {
      if (i) msg += ", ";
      msg += test.locals[i];
    }
    msg += "\nTest name: " + test.method_name + "\n";
    if (!avoid_names.empty()) {
      msg += "These names are already taken; do not propose them: ";
      for (std::size_t i = 0; i < avoid_names.size(); ++i) {
        if (i) msg += ", ";
        msg += avoid_names[i];
      }
      msg += "\n";
    }
  }
  return msg;
}

}  // namespace jrefine::llm
