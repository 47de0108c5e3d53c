#include "jrefine/purify/purify.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "jrefine/java/parser.hpp"
#include "mini_interp.hpp"
#include "reach_oracle.hpp"
#include "synthetic_corpus.hpp"

namespace jrefine::purify {
namespace {

java::TestMethod first_test(const std::string& class_source) {
  Diagnostics diags;
  auto tree = java::parse_source(class_source, diags);
  EXPECT_NE(tree, nullptr);
  auto methods = java::extract_test_methods(tree);
  EXPECT_FALSE(methods.empty());
  return methods.front();
}

std::string wrap_body(const std::string& body) {
  return "public class T {\n    public void testIt() {\n" + body +
         "    }\n}\n";
}

std::vector<std::string> prefix_texts(const PurifiedTest& t) {
  std::vector<std::string> out;
  for (const AtomizedStatement& s : t.prefix.statements) out.push_back(s.text);
  return out;
}

std::vector<PurifiedTest> purify_body(const std::string& body,
                                      Diagnostics* diags_out = nullptr) {
  java::TestMethod method = first_test(wrap_body(body));
  java::RwConfig cfg;
  Diagnostics diags;
  auto result = purify(method, cfg, diags);
  if (diags_out) *diags_out = diags;
  return result;
}

TEST(Purify, MatrixTestSplitsIntoTwoScenarios) {
  java::TestMethod method = first_test(testsupport::matrix_test_class());
  java::RwConfig cfg;
  Diagnostics diags;
  auto purified = purify(method, cfg, diags);
  ASSERT_EQ(purified.size(), 2u);

  // First scenario: both constructions feed the equality assertion.
  EXPECT_EQ(prefix_texts(purified[0]),
            (std::vector<std::string>{
                "RealMatrix m = new RealMatrixImpl(subTestData);",
                "RealMatrix mColumn3 = new RealMatrixImpl(subColumn3);"}));
  ASSERT_EQ(purified[0].assertions.size(), 1u);
  EXPECT_EQ(purified[0].assertions[0].statement.text,
            "assertEquals(\"Column3\", mColumn3, m.getColumnMatrix(3));");

  // Second scenario: only the matrix under test is needed.
  EXPECT_EQ(prefix_texts(purified[1]),
            (std::vector<std::string>{
                "RealMatrix m = new RealMatrixImpl(subTestData);"}));
  ASSERT_EQ(purified[1].assertions.size(), 1u);
  EXPECT_EQ(purified[1].assertions[0].statement.text,
            "assertThrows(MatrixIndexException.class, () -> m.getColumnMatrix(5));");

  EXPECT_EQ(purified[0].origin_test, "testGetColumnMatrix");
  EXPECT_EQ(purified[0].origin_class, "RealMatrixImplTest");
  EXPECT_FALSE(purified[0].had_try_catch);
}

TEST(Purify, IdenticalPrefixesMergeIntoOneTest) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        assertEquals(1, a);\n"
      "        assertTrue(a >= 0);\n");
  ASSERT_EQ(purified.size(), 1u);
  ASSERT_EQ(purified[0].assertions.size(), 2u);
  EXPECT_EQ(purified[0].assertions[0].ordinal, 0u);
  EXPECT_EQ(purified[0].assertions[1].ordinal, 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            std::vector<std::string>{"int a = 1;"});
}

TEST(Purify, UnrelatedSetupIsDropped) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        int b = 2;\n"
      "        assertEquals(1, a);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            std::vector<std::string>{"int a = 1;"});
}

TEST(Purify, TransitiveDependenciesAreKept) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        int b = a + 1;\n"
      "        int c = b + 1;\n"
      "        int d = 9;\n"
      "        assertEquals(3, c);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            (std::vector<std::string>{"int a = 1;", "int b = a + 1;",
                                      "int c = b + 1;"}));
}

TEST(Purify, ModifyingCallsKeepTheirReceiverAlive) {
  auto purified = purify_body(
      "        Helper h = new Helper(seed);\n"
      "        h.setValue(5);\n"
      "        int unrelated = 1;\n"
      "        assertTrue(h.isReady());\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            (std::vector<std::string>{"Helper h = new Helper(seed);",
                                      "h.setValue(5);"}));
}

TEST(Purify, EmptyBodyControlsNeverSurvive) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        if (a > 0) { }\n"
      "        assertEquals(1, a);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            std::vector<std::string>{"int a = 1;"});
}

TEST(Purify, ControlsContainingAssertionsAreAlwaysKept) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        if (a > 0) { assertTrue(a > 0); }\n"
      "        assertEquals(1, a);\n");
  // The assertion inside the control is not extracted on its own; the
  // control rides along in the only purified test's prefix.
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            (std::vector<std::string>{"int a = 1;",
                                      "if (a > 0) { assertTrue(a > 0); }"}));
}

TEST(Purify, MultiDeclaratorSplitsAndUnusedHalfDrops) {
  auto purified = purify_body(
      "        int a = 1, b = 2;\n"
      "        assertEquals(1, a);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            std::vector<std::string>{"int a = 1;"});
}

TEST(Purify, AssignmentChainsSplitRightToLeft) {
  auto purified = purify_body(
      "        int a = 0;\n"
      "        int b = 0;\n"
      "        a = b = 5;\n"
      "        assertEquals(5, a);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_EQ(prefix_texts(purified[0]),
            (std::vector<std::string>{"int a = 0;", "int b = 0;", "b = 5;",
                                      "a = b;"}));
}

TEST(Purify, NoAssertionsYieldsNothingAndDiagnostic) {
  Diagnostics diags;
  auto purified = purify_body("        int a = 1;\n", &diags);
  EXPECT_TRUE(purified.empty());
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags.front().code, DiagCode::NoAssertions);
}

TEST(Purify, TryCatchSetsTheFlag) {
  auto purified = purify_body(
      "        int a = 1;\n"
      "        try { a = risky(); } catch (Exception e) { a = 0; }\n"
      "        assertEquals(0, a);\n");
  ASSERT_EQ(purified.size(), 1u);
  EXPECT_TRUE(purified[0].had_try_catch);
}

TEST(Purify, RenderedTestReparsesAndKeepsStatementOrder) {
  java::TestMethod method = first_test(testsupport::matrix_test_class());
  java::RwConfig cfg;
  Diagnostics diags;
  auto purified = purify(method, cfg, diags);
  ASSERT_EQ(purified.size(), 2u);

  std::string rendered =
      render_purified(purified[0], method, "testGetColumnMatrix_1");
  EXPECT_EQ(rendered.rfind("public void testGetColumnMatrix_1()", 0), 0u);

  Diagnostics parse_diags;
  auto tree = java::parse_source("class T { " + rendered + " }", parse_diags);
  ASSERT_NE(tree, nullptr);
  EXPECT_TRUE(tree->errors().empty());

  // Body tokens = prefix tokens + assertion tokens, in order.
  std::string expected = "{\n";
  for (const AtomizedStatement& s : purified[0].prefix.statements)
    expected += s.text + "\n";
  for (const Assertion& a : purified[0].assertions)
    expected += a.statement.text + "\n";
  expected += "}";
  std::size_t brace = rendered.find('{');
  ASSERT_NE(brace, std::string::npos);
  EXPECT_TRUE(java::tokens_equal(expected, rendered.substr(brace)));
}

// -- randomized cross-checks ------------------------------------------------

struct SplitAtoms {
  TestPrefix prefix;
  std::vector<Assertion> assertions;
};

SplitAtoms split_like_purify(std::vector<AtomizedStatement> atoms) {
  SplitAtoms out;
  for (AtomizedStatement& a : atoms) {
    if (!a.control_flag && a.contains_assertion) {
      Assertion as;
      as.ordinal = out.assertions.size();
      as.statement = std::move(a);
      out.assertions.push_back(std::move(as));
    } else {
      out.prefix.statements.push_back(std::move(a));
    }
  }
  return out;
}

TEST(Purify, SlicesMatchBruteForceOracleOnRandomTests) {
  testsupport::CorpusOptions options;
  options.tests = 200;
  options.tests_per_file = 10;
  options.seed = 7;
  auto corpus = testsupport::make_corpus(options);

  int assertions_checked = 0;
  for (const auto& file : corpus) {
    Diagnostics diags;
    auto tree = java::parse_source(file.source, diags);
    ASSERT_NE(tree, nullptr) << file.file_name;
    ASSERT_TRUE(tree->errors().empty()) << file.file_name;
    for (const java::TestMethod& method : java::extract_test_methods(tree)) {
      java::RwConfig cfg;
      Diagnostics scratch;
      auto atoms = atomize_statements(method.tree, *method.body, cfg, scratch);
      SplitAtoms split = split_like_purify(std::move(atoms));
      for (const Assertion& a : split.assertions) {
        DependencyGraph g = build_dependency_graph(split.prefix, a);
        TestPrefix sliced = slice_for_assertion(split.prefix, a, g);
        std::vector<bool> keep =
            testsupport::oracle_retention(split.prefix, a);

        std::vector<std::string> expected;
        for (std::size_t i = 0; i < keep.size(); ++i)
          if (keep[i]) expected.push_back(split.prefix.statements[i].text);
        std::vector<std::string> actual;
        for (const AtomizedStatement& s : sliced.statements)
          actual.push_back(s.text);
        ASSERT_EQ(actual, expected) << method.name << " in " << file.file_name;
        ++assertions_checked;
      }
    }
  }
  EXPECT_GT(assertions_checked, 200);
}

TEST(Purify, AtomizationPreservesArithmeticSemantics) {
  testsupport::CorpusOptions options;
  options.tests = 300;
  options.tests_per_file = 10;
  options.seed = 11;
  options.arithmetic_only = true;
  auto corpus = testsupport::make_corpus(options);

  int bodies_checked = 0;
  for (const auto& file : corpus) {
    Diagnostics diags;
    auto tree = java::parse_source(file.source, diags);
    ASSERT_NE(tree, nullptr);
    ASSERT_TRUE(tree->errors().empty());
    auto methods = java::extract_test_methods(tree);
    ASSERT_EQ(methods.size(), file.tests.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
      java::RwConfig cfg;
      Diagnostics scratch;
      auto atoms =
          atomize_statements(methods[i].tree, *methods[i].body, cfg, scratch);
      std::vector<std::string> atomized_texts;
      for (const AtomizedStatement& a : atoms)
        atomized_texts.push_back(a.text);

      auto original = testsupport::interpret_statements(file.tests[i].statements);
      auto rewritten = testsupport::interpret_statements(atomized_texts);
      ASSERT_TRUE(original.ok) << original.error;
      ASSERT_TRUE(rewritten.ok) << rewritten.error;
      EXPECT_EQ(original.env, rewritten.env) << methods[i].name;
      ++bodies_checked;
    }
  }
  EXPECT_EQ(bodies_checked, 300);
}

TEST(Purify, MergingConservesAssertionsAndKeepsPrefixesDistinct) {
  testsupport::CorpusOptions options;
  options.tests = 150;
  options.tests_per_file = 5;
  options.seed = 23;
  auto corpus = testsupport::make_corpus(options);

  for (const auto& file : corpus) {
    Diagnostics diags;
    auto tree = java::parse_source(file.source, diags);
    ASSERT_NE(tree, nullptr);
    for (const java::TestMethod& method : java::extract_test_methods(tree)) {
      java::RwConfig cfg;
      Diagnostics scratch;
      auto purified = purify(method, cfg, scratch);

      // Multisets of assertion texts before/after merging must agree, and no
      // two outputs may share a token-identical prefix.
      std::multiset<std::string> all_assertions;
      std::set<std::vector<std::pair<int, std::string>>> prefix_keys;
      std::size_t total = 0;
      for (const PurifiedTest& t : purified) {
        total += t.assertions.size();
        for (const Assertion& a : t.assertions)
          all_assertions.insert(a.statement.text);
        std::vector<std::pair<int, std::string>> key;
        for (const java::Token& tok : prefix_token_stream(t.prefix))
          key.emplace_back(static_cast<int>(tok.kind), tok.text);
        EXPECT_TRUE(prefix_keys.insert(std::move(key)).second)
            << "duplicate prefix in " << method.name;
      }

      // Recompute the pre-merge assertion multiset straight from atomization.
      auto atoms = atomize_statements(method.tree, *method.body, cfg, scratch);
      std::multiset<std::string> expected;
      std::size_t expected_total = 0;
      for (const AtomizedStatement& a : atoms) {
        if (!a.control_flag && a.contains_assertion) {
          expected.insert(a.text);
          ++expected_total;
        }
      }
      EXPECT_EQ(all_assertions, expected) << method.name;
      EXPECT_EQ(total, expected_total) << method.name;
    }
  }
}

}  // namespace
}  // namespace jrefine::purify
