#include "jrefine/cli/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jrefine/integrate/integrate.hpp"
#include "jrefine/java/parser.hpp"
#include "jrefine/llm/gateway.hpp"

namespace jrefine::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string now_iso8601() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t line_start(const std::string& text, std::size_t pos) {
  std::size_t nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  return nl == std::string::npos ? 0 : nl + 1;
}

std::string indent_of_line(const std::string& text, std::size_t pos) {
  std::size_t start = line_start(text, pos);
  std::size_t i = start;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  return text.substr(start, i - start);
}

// One emitted test: the final text plus everything needed to re-verify it.
struct RefinedOutput {
  std::string purified_name;
  std::string purified_source;
  std::string final_name;
  std::string text;
  integrate::IdentifierMapping mapping;  // as applied (test_name = final)
  std::string fallback = "verbatim";     // none | comments_only | verbatim
  bool preservation_verified = true;
  int comments_placed = 0;
  int comments_dropped = 0;
  int identifiers_renamed = 0;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double llm_ms = 0.0;
  double integrate_ms = 0.0;
};

struct WorkItem {
  std::size_t file_index = 0;
  java::TestMethod method;
  double purify_ms = 0.0;
  int purified_count = 0;
  std::vector<RefinedOutput> outputs;
  Diagnostics diags;
};

struct InputFile {
  fs::path abs_path;
  std::string rel_path;
  std::string source;
  std::shared_ptr<java::SyntaxTree> tree;
  std::string compile_check = "skipped";
  int tests_discovered = 0;
  Diagnostics diags;
};

RefinedOutput verbatim_original(const java::TestMethod& method) {
  RefinedOutput out;
  out.purified_name = method.name;
  out.final_name = method.name;
  out.purified_source = std::string(method.declaration->text());
  out.text = out.purified_source;
  return out;
}

bool reparses_cleanly(const std::string& method_source) {
  Diagnostics diags;
  integrate::ParsedMethod parsed = integrate::parse_method_source(method_source, diags);
  return parsed.method && parsed.tree->errors().empty() &&
         !java::SyntaxTree::subtree_has_error(parsed.tree->root());
}

RefinedOutput refine_one(const PreparedTest& p, llm::Gateway& gateway,
                         const RunConfig& cfg, Diagnostics& diags) {
  RefinedOutput out;
  out.purified_name = p.name;
  out.final_name = p.name;
  out.purified_source = p.source;
  out.text = p.source;  // the always-safe baseline

  Diagnostics parse_diags;
  integrate::ParsedMethod parsed = integrate::parse_method_source(p.source, parse_diags);
  if (!parsed.method) {
    add_diag(diags, DiagCode::ParseErrorInTest,
             "purified test does not parse: " + p.name);
    return out;
  }

  // Comments pass.
  std::string commented = p.source;
  integrate::CommentPlan plan;
  {
    Clock::time_point t0 = Clock::now();
    llm::GatewayResult r = gateway.generate_comments(p.context);
    out.llm_ms += ms_since(t0);
    out.prompt_tokens += r.prompt_tokens;
    out.completion_tokens += r.completion_tokens;
    if (r.ok) {
      t0 = Clock::now();
      integrate::ExtractedComments extracted = integrate::extract_comments(r.text, diags);
      plan = integrate::build_comment_plan(extracted, parsed, cfg.codebleu,
                                           cfg.threshold, diags);
      commented = integrate::apply_comment_plan(p.source, parsed, plan);
      out.integrate_ms += ms_since(t0);
    } else {
      diags.insert(diags.end(), r.diags.begin(), r.diags.end());
    }
  }

  // Identifier pass, retrying while the model repeats a new name.
  integrate::IdentifierMapping mapping;
  {
    std::vector<std::string> avoid;
    for (int attempt = 0; attempt <= cfg.provider.max_retries; ++attempt) {
      Clock::time_point t0 = Clock::now();
      llm::GatewayResult r = gateway.generate_identifiers(p.context, avoid);
      out.llm_ms += ms_since(t0);
      out.prompt_tokens += r.prompt_tokens;
      out.completion_tokens += r.completion_tokens;
      if (!r.ok) {
        diags.insert(diags.end(), r.diags.begin(), r.diags.end());
        break;
      }
      t0 = Clock::now();
      integrate::MappingExtraction ext =
          integrate::extract_identifier_mapping(r.text, parsed, p.name, diags);
      out.integrate_ms += ms_since(t0);
      if (ext.duplicates_found && attempt < cfg.provider.max_retries) {
        avoid.insert(avoid.end(), ext.duplicated_names.begin(),
                     ext.duplicated_names.end());
        continue;
      }
      mapping = ext.mapping;
      break;
    }
  }

  // Comments are span-based so they go in first; renames are token-based and
  // safe on the commented text.
  Clock::time_point t0 = Clock::now();
  integrate::RenameResult renamed = integrate::apply_renames(commented, mapping, diags);
  if (!renamed.ok) mapping = {};
  std::string refined = renamed.ok ? renamed.text : commented;

  bool preserved = integrate::verify_preservation(p.source, refined, mapping);
  bool reparses = reparses_cleanly(refined);
  out.integrate_ms += ms_since(t0);

  if (preserved && reparses) {
    out.text = refined;
    out.final_name = mapping.test_name ? mapping.test_name->second : p.name;
    out.mapping = mapping;
    out.fallback = "none";
    out.comments_placed =
        static_cast<int>(plan.placements.size() + plan.block_comments.size());
    out.comments_dropped = static_cast<int>(plan.dropped.size());
    out.identifiers_renamed =
        static_cast<int>(mapping.entries.size()) + (mapping.test_name ? 1 : 0);
    return out;
  }
  add_diag(diags, DiagCode::PreservationFailed,
           "refined test failed the preservation gate; falling back: " + p.name);

  integrate::IdentifierMapping no_renames;
  if (integrate::verify_preservation(p.source, commented, no_renames) &&
      reparses_cleanly(commented)) {
    out.text = commented;
    out.fallback = "comments_only";
    out.comments_placed =
        static_cast<int>(plan.placements.size() + plan.block_comments.size());
    out.comments_dropped = static_cast<int>(plan.dropped.size());
    return out;
  }
  return out;  // verbatim purified
}

void process_item(WorkItem& item, llm::Gateway& gateway, const RunConfig& cfg) {
  if (item.method.has_parse_errors) {
    add_diag(item.diags, DiagCode::ParseErrorInTest,
             "test has parse errors and is left unchanged: " + item.method.name);
    item.outputs.push_back(verbatim_original(item.method));
    return;
  }
  Clock::time_point t0 = Clock::now();
  std::vector<PreparedTest> prepared = prepare_tests(item.method, cfg.rw, item.diags);
  item.purify_ms = ms_since(t0);
  item.purified_count = static_cast<int>(prepared.size());
  if (prepared.empty()) {
    item.outputs.push_back(verbatim_original(item.method));
    return;
  }
  for (const PreparedTest& p : prepared)
    item.outputs.push_back(refine_one(p, gateway, cfg, item.diags));
}

// The smallest class body containing each method, so sibling names can be
// tracked per class.
const java::AstNode* enclosing_class_body(
    const std::vector<const java::AstNode*>& bodies, const java::AstNode& method) {
  const java::AstNode* best = nullptr;
  for (const java::AstNode* b : bodies)
    if (b->span().contains(method.span()) && (!best || best->span().contains(b->span())))
      best = b;
  return best;
}

// Renames collide only at assembly time, when all sibling names are known.
void fix_name_collisions(const InputFile& file, std::vector<WorkItem*>& items) {
  std::map<const java::AstNode*, std::set<std::string>> taken;
  std::vector<const java::AstNode*> bodies;
  std::vector<const java::AstNode*> methods;
  file.tree->root().collect_kind(java::kind::class_body, bodies);
  file.tree->root().collect_kind(java::kind::method_declaration, methods);
  for (const java::AstNode* m : methods) {
    const java::AstNode* name = m->child_by_kind(java::kind::identifier);
    const java::AstNode* body = enclosing_class_body(bodies, *m);
    if (name && body) taken[body].insert(std::string(name->text()));
  }
  for (WorkItem* item : items) taken[item->method.class_body].erase(item->method.name);

  for (WorkItem* item : items) {
    std::set<std::string>& names = taken[item->method.class_body];
    for (RefinedOutput& out : item->outputs) {
      std::string name = out.final_name;
      if (names.count(name)) {
        int suffix = 1;
        do {
          name = out.final_name + "_" + std::to_string(suffix++);
        } while (names.count(name));
        std::string fixed = integrate::rename_test_method(out.text, name, item->diags);
        integrate::IdentifierMapping mapping = out.mapping;
        mapping.test_name = std::make_pair(out.purified_name, name);
        if (integrate::verify_preservation(out.purified_source, fixed, mapping)) {
          out.text = std::move(fixed);
          out.mapping = std::move(mapping);
        } else {
          // Last resort: the purified text under the forced name.
          add_diag(item->diags, DiagCode::PreservationFailed,
                   "collision fix broke preservation; emitting purified text: " +
                       out.purified_name);
          out.text = integrate::rename_test_method(out.purified_source, name,
                                                   item->diags);
          out.mapping = {};
          out.mapping.test_name = std::make_pair(out.purified_name, name);
          out.fallback = "verbatim";
          out.comments_placed = 0;
          out.identifiers_renamed = 0;
        }
        out.final_name = name;
      }
      names.insert(name);
    }
  }
}

std::string assemble_file(const InputFile& file, std::vector<WorkItem*>& items) {
  struct Splice {
    std::size_t begin, end;
    std::string text;
  };
  std::vector<Splice> splices;
  for (WorkItem* item : items) {
    const java::Span& span = item->method.declaration->span();
    splices.push_back({span.begin, span.end, item->outputs.front().text});
    if (item->outputs.size() > 1 && item->method.class_body) {
      std::size_t at = item->method.class_body->span().end - 1;
      std::string indent = indent_of_line(file.source, span.begin);
      for (std::size_t i = 1; i < item->outputs.size(); ++i)
        splices.push_back({at, at, "\n" + indent + item->outputs[i].text + "\n"});
    }
  }
  std::stable_sort(splices.begin(), splices.end(),
                   [](const Splice& a, const Splice& b) { return a.begin < b.begin; });
  std::string out = file.source;
  for (auto it = splices.rbegin(); it != splices.rend(); ++it)
    out.replace(it->begin, it->end - it->begin, it->text);
  return out;
}

std::string run_compile_check(const std::string& tmpl, const fs::path& file,
                              Diagnostics& diags) {
  std::string cmd = tmpl;
  std::string quoted = "\"" + file.string() + "\"";
  bool substituted = false;
  for (std::size_t at; (at = cmd.find("{}")) != std::string::npos;) {
    cmd.replace(at, 2, quoted);
    substituted = true;
  }
  if (!substituted) cmd += " " + quoted;
  int status = std::system(cmd.c_str());
  if (status < 0) {
    add_diag(diags, DiagCode::CompileCommandNotFound,
             "compile check could not run: " + cmd);
    return "command_not_found";
  }
  int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  if (exit_code == 127) {
    add_diag(diags, DiagCode::CompileCommandNotFound,
             "compile check command not found: " + cmd);
    return "command_not_found";
  }
  if (exit_code != 0) {
    add_diag(diags, DiagCode::CompileCheckFailed,
             "compile check exited with " + std::to_string(exit_code));
    return "fail";
  }
  return "pass";
}

nlohmann::ordered_json diags_to_json(const Diagnostics& diags) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Diagnostic& d : diags)
    out.push_back(std::string(diag_code_name(d.code)) + ": " + d.message);
  return out;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json out;
  out["inputs"] = c.inputs;
  out["out"] = c.out_dir;
  out["threshold"] = c.threshold;
  out["workers"] = c.workers;
  out["offline"] = c.offline;
  out["serial"] = c.serial;
  out["compile_cmd"] = c.compile_cmd;
  out["provider"] = {{"endpoint", c.provider.endpoint},
                     {"model", c.provider.model},
                     {"credential_env", c.provider.credential_env},
                     {"temperature", c.provider.temperature},
                     {"max_retries", c.provider.max_retries},
                     {"timeout_ms", c.provider.timeout.count()},
                     {"max_concurrent", c.provider.max_concurrent},
                     {"fixtures_dir", c.provider.fixtures_dir}};
  out["codebleu"] = {{"alpha", c.codebleu.alpha},
                     {"beta", c.codebleu.beta},
                     {"gamma", c.codebleu.gamma},
                     {"delta", c.codebleu.delta},
                     {"max_ngram", c.codebleu.max_ngram},
                     {"keyword_weight", c.codebleu.keyword_weight}};
  out["modification_keywords"] = c.rw.modification_keywords;
  return out;
}

}  // namespace

std::vector<PreparedTest> prepare_tests(const java::TestMethod& test,
                                        const java::RwConfig& rw, Diagnostics& diags) {
  std::vector<PreparedTest> out;
  std::vector<purify::PurifiedTest> purified = purify::purify(test, rw, diags);
  bool flagged_try = false;
  for (std::size_t k = 0; k < purified.size(); ++k) {
    PreparedTest p;
    p.purified = purified[k];
    p.name = test.name + "_" + std::to_string(k + 1);
    p.source = purify::render_purified(purified[k], test, p.name);
    p.context.class_name = test.class_name;
    p.context.method_name = p.name;
    p.context.source = p.source;
    if (purified[k].had_try_catch && !flagged_try) {
      add_diag(diags, DiagCode::TryCatchInTest,
               "test contains try/catch control flow: " + test.name);
      flagged_try = true;
    }

    // Locals in declaration order, for the rename prompt.
    Diagnostics parse_diags;
    integrate::ParsedMethod parsed = integrate::parse_method_source(p.source, parse_diags);
    if (parsed.method) {
      std::vector<const java::AstNode*> declarators;
      parsed.method->collect_kind(java::kind::variable_declarator, declarators);
      std::set<std::string> seen;
      for (const java::AstNode* d : declarators) {
        const java::AstNode* name = d->child_by_kind(java::kind::identifier);
        if (name && seen.insert(std::string(name->text())).second)
          p.context.locals.emplace_back(name->text());
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool validate_examples_bundle(const nlohmann::ordered_json& bundle, std::string* error) {
  auto fail = [error](const std::string& message) {
    if (error) *error = message;
    return false;
  };
  if (!bundle.is_object()) return fail("bundle is not an object");
  if (!bundle.contains("tests") || !bundle["tests"].is_array())
    return fail("bundle.tests missing or not an array");
  for (const auto& entry : bundle["tests"]) {
    if (!entry.is_object()) return fail("test entry is not an object");
    for (const char* key : {"source_file", "class_name", "test_name"})
      if (!entry.contains(key) || !entry[key].is_string())
        return fail(std::string("test entry field missing or wrong type: ") + key);
    if (!entry.contains("refined") || !entry["refined"].is_array() ||
        entry["refined"].empty())
      return fail("test entry has no refined array");
    for (const auto& refined : entry["refined"]) {
      if (!refined.is_object()) return fail("refined entry is not an object");
      for (const char* key : {"name", "purified_name", "source", "fallback"})
        if (!refined.contains(key) || !refined[key].is_string())
          return fail(std::string("refined entry field missing or wrong type: ") + key);
    }
  }
  return true;
}

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult result;
  if (!validate_config(config, result.diags)) {
    result.exit_code = 2;
    return result;
  }

  // Discover input files.
  std::vector<InputFile> files;
  std::set<std::string> used_rel;
  for (const std::string& input : config.inputs) {
    fs::path path(input);
    std::error_code ec;
    if (!fs::exists(path, ec)) {
      add_diag(result.diags, DiagCode::IoError, "input path does not exist: " + input);
      result.exit_code = 3;
      return result;
    }
    std::vector<fs::path> found;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".java")
          found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      for (const fs::path& p : found) {
        InputFile f;
        f.abs_path = p;
        f.rel_path = fs::relative(p, path).generic_string();
        files.push_back(std::move(f));
      }
    } else {
      InputFile f;
      f.abs_path = path;
      f.rel_path = path.filename().generic_string();
      files.push_back(std::move(f));
    }
  }
  for (InputFile& f : files) {
    std::string rel = f.rel_path;
    for (int n = 1; used_rel.count(rel); ++n)
      rel = "dup" + std::to_string(n) + "_" + f.rel_path;
    used_rel.insert(rel);
    f.rel_path = rel;
  }

  // Read and parse, collecting work items.
  std::vector<WorkItem> items;
  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    InputFile& f = files[fi];
    std::ifstream in(f.abs_path, std::ios::binary);
    if (!in) {
      add_diag(f.diags, DiagCode::IoError, "cannot read file: " + f.abs_path.string());
      continue;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    f.source = ss.str();
    f.tree = java::parse_source(f.source, f.diags);
    if (!f.tree) continue;
    for (java::TestMethod& method : java::extract_test_methods(f.tree)) {
      WorkItem item;
      item.file_index = fi;
      item.method = std::move(method);
      items.push_back(std::move(item));
    }
    f.tests_discovered = static_cast<int>(
        std::count_if(items.begin(), items.end(),
                      [fi](const WorkItem& w) { return w.file_index == fi; }));
  }
  std::stable_sort(items.begin(), items.end(), [](const WorkItem& a, const WorkItem& b) {
    if (a.file_index != b.file_index) return a.file_index < b.file_index;
    return a.method.declaration->span().begin < b.method.declaration->span().begin;
  });

  // Output tree.
  std::error_code ec;
  fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir, ec);
  if (ec) {
    add_diag(result.diags, DiagCode::IoError,
             "cannot create output directory: " + config.out_dir);
    result.exit_code = 3;
    return result;
  }

  llm::ProviderConfig provider_config = config.provider;
  std::unique_ptr<llm::Provider> provider =
      config.offline ? llm::make_mock_provider(provider_config)
                     : llm::make_http_provider(provider_config);
  llm::Gateway gateway(std::move(provider), provider_config);

  // The refinement loop: items are independent; results land in their slots.
  bool parallel = !config.serial && config.workers > 1;
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(config.workers)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i)
      process_item(items[i], gateway, config);
  } else
#endif
  {
    (void)parallel;
    for (WorkItem& item : items) process_item(item, gateway, config);
  }

  // Reassemble and write each file.
  std::map<std::size_t, std::vector<WorkItem*>> by_file;
  for (WorkItem& item : items) by_file[item.file_index].push_back(&item);
  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    InputFile& f = files[fi];
    if (f.source.empty() && !f.diags.empty()) continue;  // unreadable
    std::string assembled = f.source;
    auto hit = by_file.find(fi);
    if (hit != by_file.end() && f.tree) {
      fix_name_collisions(f, hit->second);
      assembled = assemble_file(f, hit->second);
    }
    fs::path out_path = out_dir / f.rel_path;
    fs::create_directories(out_path.parent_path(), ec);
    std::ofstream out(out_path, std::ios::binary);
    out << assembled;
    if (!out) {
      add_diag(result.diags, DiagCode::IoError,
               "cannot write output file: " + out_path.string());
      result.exit_code = 3;
      return result;
    }
    out.close();
    if (!config.compile_cmd.empty())
      f.compile_check = run_compile_check(config.compile_cmd, out_path, f.diags);
  }

  // Audit log, sorted for stable output regardless of worker interleaving.
  std::vector<llm::LlmExchange> audit = gateway.audit_trail();
  std::stable_sort(audit.begin(), audit.end(),
                   [](const llm::LlmExchange& a, const llm::LlmExchange& b) {
                     if (a.request_text != b.request_text)
                       return a.request_text < b.request_text;
                     return a.task < b.task;
                   });
  {
    std::ofstream log(out_dir / "audit_log.jsonl", std::ios::binary);
    for (const llm::LlmExchange& e : audit) {
      nlohmann::ordered_json line = {
          {"task", e.task},
          {"provider_id", e.provider_id},
          {"prompt_tokens", e.prompt_tokens},
          {"completion_tokens", e.completion_tokens},
          {"latency_ms", e.latency_ms},
          {"request", e.request_text},
          {"response", e.response_text},
      };
      log << line.dump() << "\n";
    }
    if (!log) {
      add_diag(result.diags, DiagCode::IoError, "cannot write audit log");
      result.exit_code = 3;
      return result;
    }
  }

  // Report.
  nlohmann::ordered_json report;
  report["schema_version"] = "1";
  report["run"] = {
      {"generated_at", now_iso8601()},
      {"grammar_version", java::kGrammarVersion},
      {"template_versions",
       {{"comments", llm::default_comment_template().version},
        {"identifiers", llm::default_identifier_template().version}}},
      {"provider_id", gateway.provider_id()},
      {"config", config_to_json(config)},
  };
  report["files"] = nlohmann::ordered_json::array();
  for (const InputFile& f : files) {
    report["files"].push_back({{"path", f.rel_path},
                               {"tests_discovered", f.tests_discovered},
                               {"compile_check", f.compile_check},
                               {"diagnostics", diags_to_json(f.diags)}});
  }

  int emitted = 0, comments_placed = 0, comments_dropped = 0, identifiers_renamed = 0;
  int preservation_failures = 0, fallback_none = 0, fallback_comments = 0,
      fallback_verbatim = 0, purified_total = 0;
  report["tests"] = nlohmann::ordered_json::array();
  for (const WorkItem& item : items) {
    nlohmann::ordered_json refined = nlohmann::ordered_json::array();
    for (const RefinedOutput& out : item.outputs) {
      refined.push_back({{"name", out.final_name},
                         {"purified_name", out.purified_name},
                         {"comments_placed", out.comments_placed},
                         {"comments_dropped", out.comments_dropped},
                         {"identifiers_renamed", out.identifiers_renamed},
                         {"preservation_verified", out.preservation_verified},
                         {"fallback", out.fallback},
                         {"llm_tokens",
                          {{"prompt", out.prompt_tokens},
                           {"completion", out.completion_tokens}}},
                         {"timings_ms",
                          {{"llm", out.llm_ms}, {"integrate", out.integrate_ms}}}});
      ++emitted;
      comments_placed += out.comments_placed;
      comments_dropped += out.comments_dropped;
      identifiers_renamed += out.identifiers_renamed;
      preservation_failures += out.preservation_verified ? 0 : 1;
      if (out.fallback == "none") ++fallback_none;
      else if (out.fallback == "comments_only") ++fallback_comments;
      else ++fallback_verbatim;
    }
    purified_total += item.purified_count;
    report["tests"].push_back({{"source_file", files[item.file_index].rel_path},
                               {"class_name", item.method.class_name},
                               {"test_name", item.method.name},
                               {"purified_count", item.purified_count},
                               {"purify_ms", item.purify_ms},
                               {"refined", std::move(refined)},
                               {"diagnostics", diags_to_json(item.diags)}});
  }
  report["aggregates"] = {
      {"files", files.size()},
      {"tests_discovered", items.size()},
      {"purified_total", purified_total},
      {"tests_emitted", emitted},
      {"comments_placed", comments_placed},
      {"comments_dropped", comments_dropped},
      {"identifiers_renamed", identifiers_renamed},
      {"preservation_failures", preservation_failures},
      {"fallback_none", fallback_none},
      {"fallback_comments_only", fallback_comments},
      {"fallback_verbatim", fallback_verbatim},
  };

  fs::path report_path = config.report_path.empty() ? out_dir / "report.json"
                                                    : fs::path(config.report_path);
  {
    fs::create_directories(report_path.parent_path(), ec);
    std::ofstream out(report_path, std::ios::binary);
    out << report.dump(2) << "\n";
    if (!out) {
      add_diag(result.diags, DiagCode::IoError,
               "cannot write report: " + report_path.string());
      result.exit_code = 3;
      return result;
    }
  }

  if (!config.export_examples_path.empty()) {
    nlohmann::ordered_json bundle;
    bundle["tests"] = nlohmann::ordered_json::array();
    for (const WorkItem& item : items) {
      nlohmann::ordered_json refined = nlohmann::ordered_json::array();
      for (const RefinedOutput& out : item.outputs)
        refined.push_back({{"name", out.final_name},
                           {"purified_name", out.purified_name},
                           {"source", out.text},
                           {"fallback", out.fallback}});
      bundle["tests"].push_back({{"source_file", files[item.file_index].rel_path},
                                 {"class_name", item.method.class_name},
                                 {"test_name", item.method.name},
                                 {"refined", std::move(refined)}});
    }
    std::string error;
    if (!validate_examples_bundle(bundle, &error)) {
      add_diag(result.diags, DiagCode::IoError, "export bundle invalid: " + error);
    }
    fs::path bundle_path(config.export_examples_path);
    if (bundle_path.has_parent_path()) fs::create_directories(bundle_path.parent_path(), ec);
    std::ofstream out(bundle_path, std::ios::binary);
    out << bundle.dump(2) << "\n";
    if (!out) {
      add_diag(result.diags, DiagCode::IoError,
               "cannot write example bundle: " + config.export_examples_path);
      result.exit_code = 3;
      return result;
    }
  }

  result.report = std::move(report);
  return result;
}

}  // namespace jrefine::cli
