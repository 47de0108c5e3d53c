#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "jrefine/diagnostics.hpp"
#include "jrefine/java/ast.hpp"

namespace jrefine::java {

// Identifies the grammar accepted by the parser; recorded in the run report
// so outputs can be traced to a parser revision.
inline constexpr const char* kGrammarVersion = "jrefine-java-1.0";

// Parses a compilation unit. Always returns a tree with a `program` root;
// malformed regions become ERROR statement nodes and entries in
// tree->errors(). Returns nullptr (with a diagnostic) only when the input is
// not valid UTF-8 (UnreadableInput) or no tree could be produced (FatalParse).
std::shared_ptr<SyntaxTree> parse_source(std::string source, Diagnostics& diags);

// Parses a fragment consisting of block-level statements. The returned tree's
// root is a `block` whose children are the statements; spans index into the
// fragment text itself.
std::shared_ptr<SyntaxTree> parse_statement_fragment(std::string fragment,
                                                     Diagnostics& diags);

// Convenience: first child of the fragment block, or nullptr.
const AstNode* first_statement(const SyntaxTree& fragment_tree);

}  // namespace jrefine::java
