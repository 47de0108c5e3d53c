#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "jrefine/java/parser.hpp"
#include "jrefine/java/rw.hpp"
#include "jrefine/java/test_methods.hpp"
#include "jrefine/llm/provider.hpp"

namespace jrefine::llm {

namespace {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string serialize_request(const ChatRequest& r) {
  return r.model + '\n' + r.system + '\n' + r.user;
}

int rough_token_count(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (char c : text) {
    bool ws = std::isspace(static_cast<unsigned char>(c));
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

// Last ```java fenced block in the text (the test under work; the one-shot
// example fence comes earlier).
std::string last_java_fence(const std::string& text) {
  const std::string open = "```java\n";
  std::size_t start = text.rfind(open);
  if (start == std::string::npos) return {};
  start += open.size();
  std::size_t end = text.find("\n```", start);
  if (end == std::string::npos) return text.substr(start);
  return text.substr(start, end - start);
}

// Last "Label: a, b, c" line in the text.
std::vector<std::string> last_labeled_list(const std::string& text,
                                           const std::string& label) {
  std::size_t at = text.rfind(label);
  if (at == std::string::npos) return {};
  at += label.size();
  std::size_t end = text.find('\n', at);
  std::string line = text.substr(at, end == std::string::npos ? std::string::npos
                                                              : end - at);
  std::vector<std::string> out;
  std::string cur;
  for (char c : line + ",") {
    if (c == ',') {
      // trim
      std::size_t b = cur.find_first_not_of(" \t");
      std::size_t e = cur.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

class MockProvider final : public Provider {
 public:
  explicit MockProvider(ProviderConfig config) : config_(std::move(config)) {}

  std::string id() const override { return "mock"; }

  ChatResponse complete(const ChatRequest& request) override {
    ChatResponse resp;
    std::string canned = load_fixture(request);
    if (!canned.empty()) {
      resp.text = std::move(canned);
    } else if (request.system.find("renaming identifiers") != std::string::npos) {
      resp.text = synthesize_identifiers(request);
    } else {
      resp.text = synthesize_comments(request);
    }
    resp.prompt_tokens = rough_token_count(serialize_request(request));
    resp.completion_tokens = rough_token_count(resp.text);
    return resp;
  }

 private:
  ProviderConfig config_;

  std::string load_fixture(const ChatRequest& request) const {
    if (config_.fixtures_dir.empty()) return {};
    std::filesystem::path p =
        std::filesystem::path(config_.fixtures_dir) / mock_request_filename(request);
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Echo the test with a doc comment and Arrange/Act/Assert line comments.
  // Statements are re-emitted from their AST spans, so the code tokens are
  // untouched.
  std::string synthesize_comments(const ChatRequest& request) const {
    std::string code = last_java_fence(request.user);
    Diagnostics diags;
    auto tree = java::parse_source("class MockWrapper {\n" + code + "\n}", diags);
    const java::AstNode* method = nullptr;
    if (tree && tree->has_root()) {
      std::vector<const java::AstNode*> methods;
      tree->root().collect_kind(java::kind::method_declaration, methods);
      if (!methods.empty()) method = methods.front();
    }
    if (!method) return "```java\n" + code + "\n```";

    const java::AstNode* body = method->child_by_kind(java::kind::block);
    std::string_view decl = method->text();
    std::string_view head =
        decl.substr(0, body->span().begin - method->span().begin);

    std::vector<const java::AstNode*> stmts;
    for (const auto& c : body->children())
      if (!c->is_comment() && c->kind() != java::kind::empty_statement)
        stmts.push_back(c.get());

    std::size_t first_assert = stmts.size();
    for (std::size_t i = 0; i < stmts.size(); ++i)
      if (java::is_assertion_statement(*stmts[i])) {
        first_assert = i;
        break;
      }

    std::string out = "```java\n";
    out += "/**\n * Exercises one behavior of the class under test.\n */\n";
    out += std::string(head) + "{\n";
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      const char* note;
      if (java::is_assertion_statement(*stmts[i]))
        note = "// Assert: check the expected outcome.";
      else if (i + 1 == first_assert)
        note = "// Act: perform the operation under test.";
      else
        note = "// Arrange: set up the test data.";
      out += std::string("    ") + note + "\n";
      out += "    " + std::string(stmts[i]->text()) + "\n";
    }
    out += "}\n```";
    return out;
  }

  // Deterministic rename table: `old -> oldVal` (locals), `old -> oldCase`
  // (test name), bumping a numeric suffix past collisions with names already
  // present in the test or proposed earlier.
  std::string synthesize_identifiers(const ChatRequest& request) const {
    std::string code = last_java_fence(request.user);
    std::set<std::string> taken;
    for (const auto& tok : java::token_stream(code, true))
      if (tok.kind == java::TokenKind::Identifier) taken.insert(tok.text);
    for (const std::string& avoid :
         last_labeled_list(request.user, "do not propose them: "))
      taken.insert(avoid);

    auto propose = [&taken](const std::string& old, const std::string& suffix) {
      std::string name = old + suffix;
      for (int i = 2; taken.count(name); ++i) name = old + suffix + std::to_string(i);
      taken.insert(name);
      return name;
    };

    std::string out;
    for (const std::string& old :
         last_labeled_list(request.user, "Local variables: "))
      out += old + " -> " + propose(old, "Val") + "\n";
    for (const std::string& old : last_labeled_list(request.user, "Test name: "))
      out += old + " -> " + propose(old, "Case") + "\n";
    return out;
  }
};

}  // namespace

std::string mock_request_filename(const ChatRequest& request) {
  std::uint64_t h = fnv1a64(serialize_request(request));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf) + ".txt";
}

std::unique_ptr<Provider> make_mock_provider(const ProviderConfig& config) {
  return std::make_unique<MockProvider>(config);
}

}  // namespace jrefine::llm
