#pragma once

#include <set>
#include <string>
#include <vector>

#include "jrefine/java/ast.hpp"

namespace jrefine::java {

// Which method-name prefixes mark a call as state-modifying. A call whose
// simple name starts with one of these (case-insensitive) writes its receiver
// and its arguments in addition to reading them.
struct RwConfig {
  std::vector<std::string> modification_keywords = {
      "set",    "add",   "insert", "remove",   "put",  "push",
      "append", "clear", "delete", "write",    "update", "register",
  };
};

using NameSet = std::set<std::string>;

struct RwSets {
  NameSet reads;
  NameSet writes;
};

// Name-level read/write sets of one statement. Control structures aggregate
// their header expressions and every nested statement. Statements the
// analysis cannot interpret (ERROR nodes) conservatively report every
// mentioned name as both read and written, so slicing always retains them.
RwSets extract_rw_sets(const AstNode& statement, const RwConfig& cfg);

// Every name introduced by a declaration inside `node`: local variables,
// formal/lambda/catch parameters and instanceof pattern bindings.
NameSet collect_declared_names(const AstNode& node);

// All identifier-leaf texts in the subtree (used for conservative fallbacks).
NameSet mentioned_names(const AstNode& node);

// Simple (last) name of a method_invocation node, e.g. "getColumnMatrix".
std::string invocation_name(const AstNode& invocation);

// True when the statement is an assertion: an expression statement whose
// call chain contains a recognized assertion API (assert*, fail, verify).
bool is_assertion_statement(const AstNode& statement);

}  // namespace jrefine::java
