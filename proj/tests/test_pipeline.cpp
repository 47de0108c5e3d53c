#include "jrefine/cli/pipeline.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "jrefine/java/parser.hpp"
#include "jrefine/llm/provider.hpp"
#include "synthetic_corpus.hpp"

namespace jrefine::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("jrefine_pl_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  ASSERT_TRUE(out) << p;
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in) << p;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig offline_config(const fs::path& in, const fs::path& out) {
  RunConfig config;
  config.inputs = {in.string()};
  config.out_dir = out.string();
  config.offline = true;
  config.serial = true;
  return config;
}

// Zeroes the fields that legitimately differ between two identical runs
// (timestamps and timings) so everything else can be compared exactly.
void mask_volatile(ordered_json& j) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      if (key == "generated_at") {
        value = "MASKED";
      } else if (key == "purify_ms" || key == "llm" || key == "integrate" ||
                 key == "latency_ms") {
        value = 0;
      } else {
        mask_volatile(value);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) mask_volatile(v);
  }
}

ordered_json masked_report(PipelineResult& result) {
  ordered_json copy = result.report;
  mask_volatile(copy);
  return copy;
}

std::vector<ordered_json> masked_audit(const fs::path& out_dir) {
  std::vector<ordered_json> lines;
  std::ifstream in(out_dir / "audit_log.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    mask_volatile(j);
    lines.push_back(std::move(j));
  }
  return lines;
}

std::map<std::string, std::string> java_outputs(const fs::path& out_dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".java")
      out[fs::relative(entry.path(), out_dir).generic_string()] =
          read_file(entry.path());
  return out;
}

TEST(Pipeline, PrepareTestsNamesRendersAndContexts) {
  Diagnostics diags;
  auto tree = java::parse_source(testsupport::matrix_test_class(), diags);
  auto methods = java::extract_test_methods(tree);
  ASSERT_EQ(methods.size(), 1u);
  java::RwConfig rw;
  auto prepared = prepare_tests(methods[0], rw, diags);
  ASSERT_EQ(prepared.size(), 2u);
  EXPECT_EQ(prepared[0].name, "testGetColumnMatrix_1");
  EXPECT_EQ(prepared[1].name, "testGetColumnMatrix_2");
  EXPECT_EQ(prepared[0].context.class_name, "RealMatrixImplTest");
  EXPECT_EQ(prepared[0].context.method_name, "testGetColumnMatrix_1");
  EXPECT_EQ(prepared[0].context.source, prepared[0].source);
  EXPECT_EQ(prepared[0].source.rfind("public void testGetColumnMatrix_1()", 0),
            0u);
  EXPECT_EQ(prepared[0].context.locals,
            (std::vector<std::string>{"m", "mColumn3"}));
  EXPECT_EQ(prepared[1].context.locals, (std::vector<std::string>{"m"}));
}

TEST(Pipeline, MatrixClassRefinesOfflineEndToEnd) {
  TempDir in, out;
  write_file(in.path / "RealMatrixImplTest.java", testsupport::matrix_test_class());
  PipelineResult result = run_pipeline(offline_config(in.path, out.path));
  ASSERT_EQ(result.exit_code, 0);

  const ordered_json& agg = result.report["aggregates"];
  EXPECT_EQ(agg["files"].get<int>(), 1);
  EXPECT_EQ(agg["tests_discovered"].get<int>(), 1);
  EXPECT_EQ(agg["purified_total"].get<int>(), 2);
  EXPECT_EQ(agg["tests_emitted"].get<int>(), 2);
  EXPECT_EQ(agg["preservation_failures"].get<int>(), 0);
  EXPECT_EQ(agg["fallback_none"].get<int>(), 2);
  EXPECT_GT(agg["comments_placed"].get<int>(), 0);
  EXPECT_GE(agg["identifiers_renamed"].get<int>(), 2);

  // The refined file exists, parses cleanly, and holds the two new tests.
  std::string refined = read_file(out.path / "RealMatrixImplTest.java");
  Diagnostics diags;
  auto tree = java::parse_source(refined, diags);
  ASSERT_NE(tree, nullptr);
  EXPECT_TRUE(tree->errors().empty());
  auto methods = java::extract_test_methods(tree);
  ASSERT_EQ(methods.size(), 2u);
  EXPECT_EQ(methods[0].name, "testGetColumnMatrix_1Case");
  EXPECT_EQ(methods[1].name, "testGetColumnMatrix_2Case");
  // the multi-scenario original is gone
  EXPECT_EQ(refined.find("void testGetColumnMatrix()"), std::string::npos);
  // mock renames applied
  EXPECT_NE(refined.find("RealMatrix mVal = new RealMatrixImpl(subTestData);"),
            std::string::npos);

  // Report content for the one discovered test.
  const ordered_json& test = result.report["tests"][0];
  EXPECT_EQ(test["test_name"], "testGetColumnMatrix");
  EXPECT_EQ(test["class_name"], "RealMatrixImplTest");
  EXPECT_EQ(test["purified_count"].get<int>(), 2);
  ASSERT_EQ(test["refined"].size(), 2u);
  for (const auto& r : test["refined"]) {
    EXPECT_EQ(r["fallback"], "none");
    EXPECT_TRUE(r["preservation_verified"].get<bool>());
    EXPECT_GT(r["llm_tokens"]["prompt"].get<int>(), 0);
  }

  // Audit: two tasks per purified test, logged once each.
  auto audit = masked_audit(out.path);
  EXPECT_EQ(audit.size(), 4u);
  for (const auto& line : audit) {
    EXPECT_TRUE(line.contains("task"));
    EXPECT_TRUE(line.contains("request"));
    EXPECT_TRUE(line.contains("response"));
    EXPECT_EQ(line["provider_id"], "mock");
  }
}

TEST(Pipeline, ReportRunSectionIdentifiesTheToolchain) {
  TempDir in, out;
  write_file(in.path / "T.java", testsupport::matrix_test_class());
  PipelineResult result = run_pipeline(offline_config(in.path, out.path));
  ASSERT_EQ(result.exit_code, 0);
  const ordered_json& run = result.report["run"];
  EXPECT_EQ(result.report["schema_version"], "1");
  EXPECT_EQ(run["grammar_version"], java::kGrammarVersion);
  EXPECT_EQ(run["template_versions"]["comments"], "comments-v1");
  EXPECT_EQ(run["template_versions"]["identifiers"], "identifiers-v1");
  EXPECT_EQ(run["provider_id"], "mock");
  EXPECT_TRUE(run["config"].is_object());
  const ordered_json& file = result.report["files"][0];
  EXPECT_EQ(file["path"], "T.java");
  EXPECT_EQ(file["tests_discovered"].get<int>(), 1);
  EXPECT_EQ(file["compile_check"], "skipped");
}

TEST(Pipeline, IdenticalRunsProduceIdenticalOutputs) {
  TempDir in, out1, out2;
  testsupport::CorpusOptions options;
  options.tests = 20;
  options.tests_per_file = 4;
  options.seed = 51;
  testsupport::write_corpus(in.path, testsupport::make_corpus(options));
  write_file(in.path / "RealMatrixImplTest.java", testsupport::matrix_test_class());

  PipelineResult r1 = run_pipeline(offline_config(in.path, out1.path));
  PipelineResult r2 = run_pipeline(offline_config(in.path, out2.path));
  ASSERT_EQ(r1.exit_code, 0);
  ASSERT_EQ(r2.exit_code, 0);

  // The runs differ only in where they write; mask that along with timings.
  ordered_json a = masked_report(r1);
  ordered_json b = masked_report(r2);
  a["run"]["config"]["out"] = b["run"]["config"]["out"] = "";
  EXPECT_EQ(a, b);
  EXPECT_EQ(java_outputs(out1.path), java_outputs(out2.path));
  EXPECT_EQ(masked_audit(out1.path), masked_audit(out2.path));
}

TEST(Pipeline, ParallelRunMatchesSerialRun) {
  TempDir in, out_serial, out_parallel;
  testsupport::CorpusOptions options;
  options.tests = 40;
  options.tests_per_file = 4;
  options.seed = 99;
  testsupport::write_corpus(in.path, testsupport::make_corpus(options));

  RunConfig serial = offline_config(in.path, out_serial.path);
  PipelineResult rs = run_pipeline(serial);

  RunConfig parallel = offline_config(in.path, out_parallel.path);
  parallel.serial = false;
  parallel.workers = 4;
  PipelineResult rp = run_pipeline(parallel);

  ASSERT_EQ(rs.exit_code, 0);
  ASSERT_EQ(rp.exit_code, 0);

  // The config snapshot legitimately differs (serial/workers); compare the
  // rest of the report plus every produced artifact.
  ordered_json a = masked_report(rs);
  ordered_json b = masked_report(rp);
  a["run"].erase("config");
  b["run"].erase("config");
  EXPECT_EQ(a, b);
  EXPECT_EQ(java_outputs(out_serial.path), java_outputs(out_parallel.path));
  EXPECT_EQ(masked_audit(out_serial.path), masked_audit(out_parallel.path));
}

TEST(Pipeline, EveryDiscoveredTestIsEmittedAndAggregatesAreSums) {
  TempDir in, out;
  testsupport::CorpusOptions options;
  options.tests = 60;
  options.tests_per_file = 6;
  options.seed = 77;
  testsupport::write_corpus(in.path, testsupport::make_corpus(options));

  PipelineResult result = run_pipeline(offline_config(in.path, out.path));
  ASSERT_EQ(result.exit_code, 0);

  const ordered_json& agg = result.report["aggregates"];
  EXPECT_EQ(agg["tests_discovered"].get<int>(), 60);

  int emitted = 0, purified = 0, placed = 0, dropped = 0, renamed = 0;
  int failures = 0, none = 0, comments_only = 0, verbatim = 0;
  for (const auto& test : result.report["tests"]) {
    ASSERT_GE(test["refined"].size(), 1u)
        << test["test_name"] << ": a test must never be lost";
    purified += test["purified_count"].get<int>();
    for (const auto& r : test["refined"]) {
      ++emitted;
      placed += r["comments_placed"].get<int>();
      dropped += r["comments_dropped"].get<int>();
      renamed += r["identifiers_renamed"].get<int>();
      failures += r["preservation_verified"].get<bool>() ? 0 : 1;
      std::string fb = r["fallback"].get<std::string>();
      if (fb == "none") ++none;
      else if (fb == "comments_only") ++comments_only;
      else ++verbatim;
    }
  }
  EXPECT_EQ(agg["tests_emitted"].get<int>(), emitted);
  EXPECT_EQ(agg["purified_total"].get<int>(), purified);
  EXPECT_EQ(agg["comments_placed"].get<int>(), placed);
  EXPECT_EQ(agg["comments_dropped"].get<int>(), dropped);
  EXPECT_EQ(agg["identifiers_renamed"].get<int>(), renamed);
  EXPECT_EQ(agg["preservation_failures"].get<int>(), failures);
  EXPECT_EQ(agg["fallback_none"].get<int>(), none);
  EXPECT_EQ(agg["fallback_comments_only"].get<int>(), comments_only);
  EXPECT_EQ(agg["fallback_verbatim"].get<int>(), verbatim);
  EXPECT_GE(emitted, 60);

  // Every output file must still parse.
  for (const auto& [rel, content] : java_outputs(out.path)) {
    Diagnostics diags;
    auto tree = java::parse_source(content, diags);
    ASSERT_NE(tree, nullptr) << rel;
    EXPECT_TRUE(tree->errors().empty()) << rel;
  }
}

TEST(Pipeline, BadConfigExitsWithCode2) {
  TempDir in, out;
  write_file(in.path / "T.java", testsupport::matrix_test_class());

  RunConfig config = offline_config(in.path, out.path);
  config.threshold = 1.5;
  PipelineResult result = run_pipeline(config);
  EXPECT_EQ(result.exit_code, 2);
  ASSERT_FALSE(result.diags.empty());
  EXPECT_EQ(result.diags.front().code, DiagCode::ConfigError);

  RunConfig no_out = offline_config(in.path, out.path);
  no_out.out_dir.clear();
  EXPECT_EQ(run_pipeline(no_out).exit_code, 2);
}

TEST(Pipeline, MissingInputExitsWithCode3) {
  TempDir out;
  RunConfig config;
  config.inputs = {"/nonexistent/path/to/tests"};
  config.out_dir = out.path.string();
  config.offline = true;
  PipelineResult result = run_pipeline(config);
  EXPECT_EQ(result.exit_code, 3);
  ASSERT_FALSE(result.diags.empty());
  EXPECT_EQ(result.diags.front().code, DiagCode::IoError);
}

TEST(Pipeline, UnparseableFileIsCopiedThroughWithDiagnostics) {
  TempDir in, out;
  const std::string garbage = "class A { \xFF\xFE }";
  write_file(in.path / "Bad.java", garbage);
  write_file(in.path / "Good.java", testsupport::matrix_test_class());
  PipelineResult result = run_pipeline(offline_config(in.path, out.path));
  ASSERT_EQ(result.exit_code, 0);

  ASSERT_EQ(result.report["files"].size(), 2u);
  bool bad_diagnosed = false;
  for (const auto& f : result.report["files"]) {
    if (f["path"] == "Bad.java") {
      EXPECT_FALSE(f["diagnostics"].empty());
      EXPECT_EQ(f["tests_discovered"].get<int>(), 0);
      bad_diagnosed = true;
    }
  }
  EXPECT_TRUE(bad_diagnosed);
  // A file the tool cannot process is passed through untouched, never lost.
  EXPECT_EQ(read_file(out.path / "Bad.java"), garbage);
  EXPECT_TRUE(fs::exists(out.path / "Good.java"));
}

TEST(Pipeline, TestWithoutAssertionsFallsBackVerbatim) {
  TempDir in, out;
  write_file(in.path / "T.java",
             "public class T {\n"
             "    public void testNothing() {\n"
             "        int a = 1;\n"
             "    }\n"
             "}\n");
  PipelineResult result = run_pipeline(offline_config(in.path, out.path));
  ASSERT_EQ(result.exit_code, 0);
  const ordered_json& test = result.report["tests"][0];
  EXPECT_EQ(test["purified_count"].get<int>(), 0);
  ASSERT_EQ(test["refined"].size(), 1u);
  EXPECT_EQ(test["refined"][0]["fallback"], "verbatim");
  EXPECT_TRUE(test["refined"][0]["preservation_verified"].get<bool>());
  bool no_assertions = false;
  for (const auto& d : test["diagnostics"])
    if (d.get<std::string>().rfind("NoAssertions", 0) == 0) no_assertions = true;
  EXPECT_TRUE(no_assertions);

  std::string refined = read_file(out.path / "T.java");
  EXPECT_NE(refined.find("public void testNothing()"), std::string::npos);
  EXPECT_NE(refined.find("int a = 1;"), std::string::npos);
}

TEST(Pipeline, CollidingProposedTestNamesGetSuffixes) {
  TempDir in, out, fixtures;
  const std::string source =
      "public class PairTest {\n"
      "    public void testFirst() {\n"
      "        int a = 1;\n"
      "        assertEquals(1, a);\n"
      "    }\n"
      "    public void testSecond() {\n"
      "        int b = 2;\n"
      "        assertEquals(2, b);\n"
      "    }\n"
      "}\n";
  write_file(in.path / "PairTest.java", source);

  // Stage identifier responses proposing the SAME test name for both tests.
  Diagnostics diags;
  auto tree = java::parse_source(source, diags);
  java::RwConfig rw;
  llm::ProviderConfig provider;  // defaults match the pipeline's
  for (const java::TestMethod& method : java::extract_test_methods(tree)) {
    for (const PreparedTest& prepared : prepare_tests(method, rw, diags)) {
      testsupport::write_mock_fixture(
          fixtures.path.string(), provider.model,
          llm::default_identifier_template(), prepared.context, {},
          prepared.name + " -> sharedScenario\n");
    }
  }

  RunConfig config = offline_config(in.path, out.path);
  config.provider.fixtures_dir = fixtures.path.string();
  PipelineResult result = run_pipeline(config);
  ASSERT_EQ(result.exit_code, 0);

  std::vector<std::string> names;
  for (const auto& test : result.report["tests"])
    for (const auto& r : test["refined"])
      names.push_back(r["name"].get<std::string>());
  ASSERT_EQ(names.size(), 2u);
  EXPECT_EQ(names[0], "sharedScenario");
  EXPECT_EQ(names[1], "sharedScenario_1");

  std::string refined = read_file(out.path / "PairTest.java");
  EXPECT_NE(refined.find("public void sharedScenario()"), std::string::npos);
  EXPECT_NE(refined.find("public void sharedScenario_1()"), std::string::npos);
  EXPECT_EQ(result.report["aggregates"]["preservation_failures"].get<int>(), 0);
}

TEST(Pipeline, CompileCheckRunsPerOutputFile) {
  TempDir in, out;
  write_file(in.path / "T.java", testsupport::matrix_test_class());

  RunConfig pass = offline_config(in.path, out.path);
  pass.compile_cmd = "true {}";
  PipelineResult rp = run_pipeline(pass);
  ASSERT_EQ(rp.exit_code, 0);
  EXPECT_EQ(rp.report["files"][0]["compile_check"], "pass");

  TempDir out2;
  RunConfig fail = offline_config(in.path, out2.path);
  fail.compile_cmd = "false";
  PipelineResult rf = run_pipeline(fail);
  EXPECT_EQ(rf.report["files"][0]["compile_check"], "fail");

  TempDir out3;
  RunConfig missing = offline_config(in.path, out3.path);
  missing.compile_cmd = "jrefine_no_such_compiler_cmd";
  PipelineResult rm = run_pipeline(missing);
  EXPECT_EQ(rm.report["files"][0]["compile_check"], "command_not_found");
}

TEST(Pipeline, ExportBundleIsValidAndMirrorsTheReport) {
  TempDir in, out;
  write_file(in.path / "T.java", testsupport::matrix_test_class());
  RunConfig config = offline_config(in.path, out.path);
  config.export_examples_path = (out.path / "bundle.json").string();
  PipelineResult result = run_pipeline(config);
  ASSERT_EQ(result.exit_code, 0);

  ordered_json bundle = ordered_json::parse(read_file(out.path / "bundle.json"));
  std::string error;
  EXPECT_TRUE(validate_examples_bundle(bundle, &error)) << error;
  ASSERT_EQ(bundle["tests"].size(), result.report["tests"].size());
  const auto& entry = bundle["tests"][0];
  EXPECT_EQ(entry["class_name"], "RealMatrixImplTest");
  ASSERT_EQ(entry["refined"].size(), 2u);
  for (const auto& r : entry["refined"]) {
    EXPECT_TRUE(r["source"].is_string());
    EXPECT_FALSE(r["source"].get<std::string>().empty());
  }
}

TEST(Pipeline, BundleValidatorRejectsMalformedShapes) {
  std::string error;
  EXPECT_FALSE(validate_examples_bundle(ordered_json::object(), &error));
  EXPECT_FALSE(error.empty());
  EXPECT_FALSE(validate_examples_bundle(ordered_json{{"tests", 3}}, &error));

  ordered_json no_refined = {{"tests", ordered_json::array(
      {{{"source_file", "a"}, {"class_name", "b"}, {"test_name", "c"}}})}};
  EXPECT_FALSE(validate_examples_bundle(no_refined, &error));

  ordered_json empty_refined = {{"tests", ordered_json::array(
      {{{"source_file", "a"}, {"class_name", "b"}, {"test_name", "c"},
        {"refined", ordered_json::array()}}})}};
  EXPECT_FALSE(validate_examples_bundle(empty_refined, &error));

  ordered_json good = {{"tests", ordered_json::array(
      {{{"source_file", "a"}, {"class_name", "b"}, {"test_name", "c"},
        {"refined", ordered_json::array(
            {{{"name", "n"}, {"purified_name", "p"}, {"source", "s"},
              {"fallback", "none"}}})}}})}};
  EXPECT_TRUE(validate_examples_bundle(good, &error)) << error;
}

TEST(Config, FileOverlaysValuesOntoDefaults) {
  TempDir dir;
  write_file(dir.path / "c.json", R"({
    "inputs": ["a", "b"],
    "out": "outdir",
    "threshold": 0.6,
    "workers": 8,
    "offline": true,
    "serial": true,
    "compile_cmd": "javac {}",
    "report": "r.json",
    "export_examples": "e.json",
    "modification_keywords": ["set", "push"],
    "provider": {
      "model": "m1",
      "credential_env": "MY_KEY",
      "endpoint": "https://example.test/v1/chat/completions",
      "temperature": 0.5,
      "max_retries": 1,
      "timeout_ms": 1234,
      "max_concurrent": 2,
      "fixtures_dir": "fx"
    },
    "codebleu": {
      "alpha": 0.1, "beta": 0.2, "gamma": 0.3, "delta": 0.4,
      "max_ngram": 2, "keyword_weight": 3.0
    }
  })");
  RunConfig config;
  Diagnostics diags;
  ASSERT_TRUE(load_config_file((dir.path / "c.json").string(), config, diags));
  EXPECT_TRUE(diags.empty());
  EXPECT_EQ(config.inputs, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(config.out_dir, "outdir");
  EXPECT_DOUBLE_EQ(config.threshold, 0.6);
  EXPECT_EQ(config.workers, 8);
  EXPECT_TRUE(config.offline);
  EXPECT_TRUE(config.serial);
  EXPECT_EQ(config.compile_cmd, "javac {}");
  EXPECT_EQ(config.report_path, "r.json");
  EXPECT_EQ(config.export_examples_path, "e.json");
  EXPECT_EQ(config.rw.modification_keywords,
            (std::vector<std::string>{"set", "push"}));
  EXPECT_EQ(config.provider.model, "m1");
  EXPECT_EQ(config.provider.credential_env, "MY_KEY");
  EXPECT_EQ(config.provider.timeout.count(), 1234);
  EXPECT_EQ(config.provider.max_concurrent, 2);
  EXPECT_EQ(config.provider.fixtures_dir, "fx");
  EXPECT_DOUBLE_EQ(config.codebleu.delta, 0.4);
  EXPECT_EQ(config.codebleu.max_ngram, 2);
  EXPECT_DOUBLE_EQ(config.codebleu.keyword_weight, 3.0);
  // the loaded values pass validation as a whole
  EXPECT_TRUE(validate_config(config, diags));
}

TEST(Config, UnknownKeysAndWrongTypesAreRejected) {
  TempDir dir;
  RunConfig config;
  Diagnostics diags;

  write_file(dir.path / "unknown.json", R"({"thresold": 0.5})");
  EXPECT_FALSE(load_config_file((dir.path / "unknown.json").string(), config, diags));
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags.back().code, DiagCode::ConfigError);
  EXPECT_NE(diags.back().message.find("thresold"), std::string::npos);

  diags.clear();
  write_file(dir.path / "nested.json", R"({"provider": {"modell": "x"}})");
  EXPECT_FALSE(load_config_file((dir.path / "nested.json").string(), config, diags));
  EXPECT_NE(diags.back().message.find("provider.modell"), std::string::npos);

  diags.clear();
  write_file(dir.path / "type.json", R"({"workers": "four"})");
  EXPECT_FALSE(load_config_file((dir.path / "type.json").string(), config, diags));
  EXPECT_EQ(diags.back().code, DiagCode::ConfigError);

  diags.clear();
  write_file(dir.path / "notjson.json", "not json at all");
  EXPECT_FALSE(load_config_file((dir.path / "notjson.json").string(), config, diags));

  diags.clear();
  EXPECT_FALSE(load_config_file((dir.path / "missing.json").string(), config, diags));
}

TEST(Config, ValidationEnforcesEveryBound) {
  auto rejects = [](void (*tweak)(RunConfig&)) {
    RunConfig config;
    config.inputs = {"x"};
    config.out_dir = "out";
    config.offline = true;
    tweak(config);
    Diagnostics diags;
    bool ok = validate_config(config, diags);
    EXPECT_EQ(ok, diags.empty());
    return !ok;
  };
  EXPECT_FALSE(rejects([](RunConfig&) {}));  // the baseline is valid
  EXPECT_TRUE(rejects([](RunConfig& c) { c.threshold = 0.0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.threshold = 1.0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.threshold = -0.2; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.workers = 0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.provider.temperature = -1.0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.provider.max_retries = -1; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.provider.max_concurrent = 0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.codebleu.alpha = 0.5; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.codebleu.max_ngram = 0; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.offline = false; }));
  EXPECT_TRUE(rejects([](RunConfig& c) { c.out_dir.clear(); }));
}

TEST(Pipeline, DuplicateRelativeNamesAreDisambiguated) {
  TempDir a, b, out;
  write_file(a.path / "Same.java", testsupport::matrix_test_class());
  write_file(b.path / "Same.java",
             "public class Other {\n"
             "    public void testX() {\n"
             "        int v = 1;\n"
             "        assertEquals(1, v);\n"
             "    }\n"
             "}\n");
  RunConfig config;
  config.inputs = {a.path.string(), b.path.string()};
  config.out_dir = out.path.string();
  config.offline = true;
  config.serial = true;
  PipelineResult result = run_pipeline(config);
  ASSERT_EQ(result.exit_code, 0);
  auto outputs = java_outputs(out.path);
  EXPECT_EQ(outputs.size(), 2u);
  EXPECT_TRUE(outputs.count("Same.java"));
  EXPECT_TRUE(outputs.count("dup1_Same.java"));
}

}  // namespace
}  // namespace jrefine::cli
