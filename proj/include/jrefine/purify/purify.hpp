#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jrefine/diagnostics.hpp"
#include "jrefine/java/ast.hpp"
#include "jrefine/java/rw.hpp"
#include "jrefine/java/test_methods.hpp"

namespace jrefine::purify {

enum class StatementType { Normal, Control };

// One indivisible unit of test code: a simple statement, or a whole control
// structure treated atomically with aggregated read/write sets.
struct AtomizedStatement {
  StatementType type = StatementType::Normal;
  java::NameSet reads;              // V_r
  java::NameSet writes;             // V_w
  bool control_flag = false;        // C; true iff type == Control
  std::optional<std::vector<AtomizedStatement>> body;  // present iff control
  bool contains_assertion = false;  // an assertion anywhere inside
  bool body_empty = true;           // control only: no executable statements

  std::string text;                 // exact source text of the statement
  // Node + owner. For statements synthesized by atomization the owner is a
  // fragment tree created for just that statement; for pass-through
  // statements it is the original file's tree.
  std::shared_ptr<const java::SyntaxTree> owner;
  const java::AstNode* node = nullptr;
};

// The shared setup part of a purified test.
struct TestPrefix {
  std::vector<AtomizedStatement> statements;
};

struct Assertion {
  AtomizedStatement statement;
  std::size_t ordinal = 0;  // 0-based position among the test's assertions
};

struct PurifiedTest {
  TestPrefix prefix;
  std::vector<Assertion> assertions;  // >= 1; > 1 only after merging
  std::string origin_test;            // original test method name
  std::string origin_class;
  bool had_try_catch = false;         // control-flow worth flagging downstream
};

// Variable dependency graph: vertex per name, edge w -> r for every
// (w in V_w, r in V_r) pair of each statement.
struct DependencyGraph {
  std::set<std::string> vertices;
  std::map<std::string, std::set<std::string>> edges;  // writer -> readers
};

// Splits a statement list into atomic units:
//  - multi-declarator declarations become one declaration per declarator,
//  - chains of plain '=' assignments split right-to-left (a = b = 1  ==>
//    b = 1; a = b;),
//  - control structures stay whole, with recursively atomized bodies and
//    aggregated R/W sets,
//  - everything else passes through.
std::vector<AtomizedStatement> atomize_statements(
    const std::shared_ptr<const java::SyntaxTree>& tree,
    const java::AstNode& block, const java::RwConfig& cfg, Diagnostics& diags);

DependencyGraph build_dependency_graph(const TestPrefix& prefix,
                                       const Assertion& assertion);

// Keeps exactly the prefix statements whose writes reach the assertion's
// reads through the graph. Control structures containing assertions are
// always kept; control structures with empty bodies are always dropped.
TestPrefix slice_for_assertion(const TestPrefix& prefix, const Assertion& assertion,
                               const DependencyGraph& graph);

// Groups single-assertion tests whose prefixes are token-identical (comments
// stripped) into one test carrying all their assertions, preserving both
// group discovery order and assertion source order.
std::vector<PurifiedTest> merge_by_prefix(const std::vector<PurifiedTest>& tests);

// Full purification of one test method: atomize, slice per assertion, merge.
// Returns an empty vector (with a NoAssertions diagnostic) when the test has
// no assertion statements.
std::vector<PurifiedTest> purify(const java::TestMethod& test,
                                 const java::RwConfig& cfg, Diagnostics& diags);

// Token stream of a prefix (statements concatenated, comments stripped);
// the key used for merge grouping and for prefix-equality assertions.
std::vector<java::Token> prefix_token_stream(const TestPrefix& prefix);

// Renders a purified test back to Java source with the given method name.
// Annotations/modifiers/parameters are carried over from the original
// declaration; body statements are re-indented one level under the method.
std::string render_purified(const PurifiedTest& test, const java::TestMethod& original,
                            std::string_view method_name);

}  // namespace jrefine::purify
