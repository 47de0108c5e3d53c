#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jrefine/java/token.hpp"

namespace jrefine::java {

// Node kind strings follow the tree-sitter-java grammar names so downstream
// consumers can reason about familiar kinds.
namespace kind {
inline constexpr const char* program = "program";
inline constexpr const char* class_declaration = "class_declaration";
inline constexpr const char* class_body = "class_body";
inline constexpr const char* method_declaration = "method_declaration";
inline constexpr const char* formal_parameters = "formal_parameters";
inline constexpr const char* formal_parameter = "formal_parameter";
inline constexpr const char* modifiers = "modifiers";
inline constexpr const char* annotation = "annotation";
inline constexpr const char* block = "block";
inline constexpr const char* local_variable_declaration = "local_variable_declaration";
inline constexpr const char* variable_declarator = "variable_declarator";
inline constexpr const char* expression_statement = "expression_statement";
inline constexpr const char* if_statement = "if_statement";
inline constexpr const char* for_statement = "for_statement";
inline constexpr const char* enhanced_for_statement = "enhanced_for_statement";
inline constexpr const char* while_statement = "while_statement";
inline constexpr const char* do_statement = "do_statement";
inline constexpr const char* switch_statement = "switch_expression";
inline constexpr const char* switch_block = "switch_block";
inline constexpr const char* try_statement = "try_statement";
inline constexpr const char* catch_clause = "catch_clause";
inline constexpr const char* finally_clause = "finally_clause";
inline constexpr const char* return_statement = "return_statement";
inline constexpr const char* throw_statement = "throw_statement";
inline constexpr const char* break_statement = "break_statement";
inline constexpr const char* continue_statement = "continue_statement";
inline constexpr const char* assert_statement = "assert_statement";
inline constexpr const char* synchronized_statement = "synchronized_statement";
inline constexpr const char* labeled_statement = "labeled_statement";
inline constexpr const char* empty_statement = "empty_statement";
inline constexpr const char* assignment_expression = "assignment_expression";
inline constexpr const char* binary_expression = "binary_expression";
inline constexpr const char* unary_expression = "unary_expression";
inline constexpr const char* update_expression = "update_expression";
inline constexpr const char* ternary_expression = "ternary_expression";
inline constexpr const char* cast_expression = "cast_expression";
inline constexpr const char* instanceof_expression = "instanceof_expression";
inline constexpr const char* lambda_expression = "lambda_expression";
inline constexpr const char* method_invocation = "method_invocation";
inline constexpr const char* method_reference = "method_reference";
inline constexpr const char* field_access = "field_access";
inline constexpr const char* array_access = "array_access";
inline constexpr const char* object_creation_expression = "object_creation_expression";
inline constexpr const char* array_creation_expression = "array_creation_expression";
inline constexpr const char* array_initializer = "array_initializer";
inline constexpr const char* parenthesized_expression = "parenthesized_expression";
inline constexpr const char* argument_list = "argument_list";
inline constexpr const char* identifier = "identifier";
inline constexpr const char* type_identifier = "type_identifier";
inline constexpr const char* literal = "literal";
inline constexpr const char* this_expression = "this";
inline constexpr const char* super_expression = "super";
inline constexpr const char* line_comment = "line_comment";
inline constexpr const char* block_comment = "block_comment";
inline constexpr const char* error = "ERROR";
}  // namespace kind

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
};

class AstNode {
 public:
  AstNode(std::string kind, Span span, const std::string* source)
      : kind_(std::move(kind)), span_(span), source_(source) {}

  const std::string& kind() const { return kind_; }
  const Span& span() const { return span_; }
  std::string_view text() const {
    return std::string_view(*source_).substr(span_.begin, span_.size());
  }

  const std::vector<std::unique_ptr<AstNode>>& children() const { return children_; }
  bool is_comment() const {
    return kind_ == kind::line_comment || kind_ == kind::block_comment;
  }

  AstNode* add_child(std::unique_ptr<AstNode> child) {
    children_.push_back(std::move(child));
    return children_.back().get();
  }
  // Inserts keeping children ordered by start offset (used for comments).
  void insert_child_sorted(std::unique_ptr<AstNode> child);
  void set_span(Span span) { span_ = span; }

  // First child with the given kind, or nullptr.
  const AstNode* child_by_kind(std::string_view k) const;
  // Depth-first collection of every descendant (including this) of kind k.
  void collect_kind(std::string_view k, std::vector<const AstNode*>& out) const;
  // Total node count of the subtree rooted here.
  std::size_t subtree_size() const;

 private:
  std::string kind_;
  Span span_;
  const std::string* source_;
  std::vector<std::unique_ptr<AstNode>> children_;
};

struct ParseError {
  Span span;
  std::string message;
};

// Owns the source text and the node tree; nodes reference the source by
// pointer, so trees are movable but the source string itself never changes.
class SyntaxTree {
 public:
  SyntaxTree(std::string source, std::vector<Token> tokens)
      : source_(std::make_shared<std::string>(std::move(source))),
        tokens_(std::move(tokens)) {}

  const std::string& source() const { return *source_; }
  const std::string* source_ptr() const { return source_.get(); }
  const std::vector<Token>& tokens() const { return tokens_; }

  const AstNode& root() const { return *root_; }
  void set_root(std::unique_ptr<AstNode> root) { root_ = std::move(root); }
  bool has_root() const { return root_ != nullptr; }

  const std::vector<ParseError>& errors() const { return errors_; }
  std::vector<ParseError>& errors() { return errors_; }

  // True when the subtree rooted at `node` contains an ERROR node.
  static bool subtree_has_error(const AstNode& node);

 private:
  std::shared_ptr<std::string> source_;
  std::vector<Token> tokens_;
  std::unique_ptr<AstNode> root_;
  std::vector<ParseError> errors_;
};

// Comment-aware token stream of a node: the node's source slice re-lexed.
// strip_comments drops comment tokens (the normal form used for prefix
// comparison and preservation checking).
std::vector<Token> token_stream(const AstNode& node, bool strip_comments);
std::vector<Token> token_stream(std::string_view text, bool strip_comments);

// True when the two texts lex to identical (kind, text) sequences with
// comments stripped.
bool tokens_equal(std::string_view a, std::string_view b);

}  // namespace jrefine::java
