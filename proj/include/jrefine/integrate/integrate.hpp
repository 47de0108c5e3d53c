#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jrefine/diagnostics.hpp"
#include "jrefine/java/ast.hpp"
#include "jrefine/similarity/codebleu.hpp"

namespace jrefine::integrate {

// A model-written `//` comment (consecutive ones pre-merged, newline-joined)
// together with the statement it annotated in the model's own output. A null
// context means the comment had no following statement to attach to.
struct InlineComment {
  std::string text;
  const java::AstNode* context = nullptr;
};

struct ExtractedComments {
  std::shared_ptr<java::SyntaxTree> tree;  // owns the context nodes
  std::vector<std::string> block_comments;
  std::vector<InlineComment> inline_comments;
};

// Parses model output (```java fences stripped) and pulls out the comments:
// block comments are those preceding the method declaration; inline comments
// carry their right-sibling statement as context. Unparseable output yields an
// empty result plus a diagnostic.
ExtractedComments extract_comments(const std::string& llm_output, Diagnostics& diags);

// A single test method parsed in isolation. Spans of nodes are relative to
// the wrapped parse text; subtract wrap_offset for offsets into the method
// source itself.
struct ParsedMethod {
  std::shared_ptr<java::SyntaxTree> tree;
  const java::AstNode* method = nullptr;
  std::size_t wrap_offset = 0;
};

ParsedMethod parse_method_source(const std::string& method_source, Diagnostics& diags);

// Statements of the method eligible as comment anchors, in source order
// (nested blocks included).
std::vector<const java::AstNode*> statement_candidates(const java::AstNode& method);

// First unclaimed candidate whose node distance to the comment's context
// exceeds the threshold; null when none qualifies.
const java::AstNode* match_comment_anchor(const InlineComment& comment,
                                          const std::vector<const java::AstNode*>& candidates,
                                          const std::set<const java::AstNode*>& claimed,
                                          const sim::CodeBleuConfig& config,
                                          double threshold);

struct CommentPlacement {
  std::string text;
  const java::AstNode* statement = nullptr;  // node of the original method
};

struct DroppedComment {
  std::string text;
  std::string reason;  // "no context" | "below threshold"
};

struct CommentPlan {
  std::vector<std::string> block_comments;
  std::vector<CommentPlacement> placements;
  std::vector<DroppedComment> dropped;
};

// Matches every extracted inline comment against the original method's
// statements (first match in source order, one comment per statement).
CommentPlan build_comment_plan(const ExtractedComments& extracted,
                               const ParsedMethod& original,
                               const sim::CodeBleuConfig& config,
                               double threshold, Diagnostics& diags);

// Splices the planned comments into the method source: block comments above
// the declaration, inline comments on their own lines before their matched
// statements. Only comment text is added — code tokens are untouched.
std::string apply_comment_plan(const std::string& method_source,
                               const ParsedMethod& parsed, const CommentPlan& plan);

struct IdentifierMapping {
  std::vector<std::pair<std::string, std::string>> entries;  // locals: old -> new
  std::optional<std::pair<std::string, std::string>> test_name;
};

struct MappingExtraction {
  IdentifierMapping mapping;  // validated; later duplicates already dropped
  bool duplicates_found = false;
  std::vector<std::string> duplicated_names;  // for the retry avoid-list
};

// Parses "old -> new" lines (also tolerates a JSON object, arrows, backticks,
// bullets, and markdown tables) and validates each pair: the old name must be
// a declared local or the test name; the new name must be a valid identifier
// not already occurring in the test; new names must not repeat.
MappingExtraction extract_identifier_mapping(const std::string& llm_output,
                                             const ParsedMethod& original,
                                             const std::string& test_name,
                                             Diagnostics& diags);

struct RenameResult {
  bool ok = false;
  std::string text;
};

// Whole-identifier textual rename, applied in descending byte-offset order.
// Member names after `.`, `::` or `@` are left alone unless they equal the
// mapped test name. The result must reparse cleanly or the rename is aborted.
RenameResult apply_renames(const std::string& method_source,
                           const IdentifierMapping& mapping, Diagnostics& diags);

// Renames only the method declaration's identifier.
std::string rename_test_method(const std::string& method_source,
                               const std::string& new_name, Diagnostics& diags);

// Hard safety gate: comment-stripped tokens of the refined text, with the
// mapping inverted on identifier tokens, must equal the comment-stripped
// tokens of the purified text. The mapping's test_name entry must hold the
// final emitted name.
bool verify_preservation(const std::string& purified_source,
                         const std::string& refined_source,
                         const IdentifierMapping& mapping);

}  // namespace jrefine::integrate
