#include "jrefine/java/ast.hpp"

#include <algorithm>

namespace jrefine::java {

void AstNode::insert_child_sorted(std::unique_ptr<AstNode> child) {
  auto it = std::upper_bound(
      children_.begin(), children_.end(), child,
      [](const std::unique_ptr<AstNode>& a, const std::unique_ptr<AstNode>& b) {
        return a->span().begin < b->span().begin;
      });
  children_.insert(it, std::move(child));
}

const AstNode* AstNode::child_by_kind(std::string_view k) const {
  for (const auto& c : children_)
    if (c->kind() == k) return c.get();
  return nullptr;
}

void AstNode::collect_kind(std::string_view k, std::vector<const AstNode*>& out) const {
  if (kind_ == k) out.push_back(this);
  for (const auto& c : children_) c->collect_kind(k, out);
}

std::size_t AstNode::subtree_size() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c->subtree_size();
  return n;
}

bool SyntaxTree::subtree_has_error(const AstNode& node) {
  if (node.kind() == kind::error) return true;
  for (const auto& c : node.children())
    if (subtree_has_error(*c)) return true;
  return false;
}

std::vector<Token> token_stream(std::string_view text, bool strip_comments) {
  LexResult lx = lex(text);
  if (!strip_comments) return std::move(lx.tokens);
  std::vector<Token> out;
  out.reserve(lx.tokens.size());
  for (auto& t : lx.tokens)
    if (!t.is_comment()) out.push_back(std::move(t));
  return out;
}

std::vector<Token> token_stream(const AstNode& node, bool strip_comments) {
  return token_stream(node.text(), strip_comments);
}

bool tokens_equal(std::string_view a, std::string_view b) {
  return token_stream(a, true) == token_stream(b, true);
}

}  // namespace jrefine::java
