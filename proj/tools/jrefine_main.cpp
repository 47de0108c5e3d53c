#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jrefine/cli/config.hpp"
#include "jrefine/cli/pipeline.hpp"

namespace {

void print_diags(const jrefine::Diagnostics& diags) {
  for (const jrefine::Diagnostic& d : diags)
    std::fprintf(stderr, "%s: %s\n", jrefine::diag_code_name(d.code),
                 d.message.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jrefine: split multi-scenario JUnit tests into single-scenario "
               "ones, then add comments and clearer names via an LLM — with a "
               "static guarantee that test behavior is untouched"};
  app.require_subcommand(1);

  CLI::App* refine = app.add_subcommand("refine", "Refine the tests under the given paths");
  std::vector<std::string> paths;
  std::string out_dir, config_file, compile_cmd, export_path, fixtures_dir, report_path;
  double threshold = 0.7;
  int workers = 4;
  bool offline = false, serial = false;
  refine->add_option("paths", paths, ".java files or directories to refine")->required();
  refine->add_option("--out", out_dir, "output directory (mirrors input layout)")->required();
  refine->add_option("--config", config_file, "JSON config file");
  CLI::Option* opt_threshold =
      refine->add_option("--threshold", threshold, "comment-anchor similarity threshold (default 0.7)");
  CLI::Option* opt_workers = refine->add_option("--workers", workers, "parallel workers (default 4)");
  CLI::Option* opt_offline =
      refine->add_flag("--offline", offline, "use the deterministic mock provider");
  CLI::Option* opt_serial =
      refine->add_flag("--serial", serial, "single-threaded reference path");
  CLI::Option* opt_compile =
      refine->add_option("--compile-cmd", compile_cmd, "external check; {} is the output file");
  CLI::Option* opt_export =
      refine->add_option("--export-examples", export_path, "write an in-context example bundle");
  CLI::Option* opt_fixtures =
      refine->add_option("--fixtures-dir", fixtures_dir, "canned responses for --offline");
  CLI::Option* opt_report = refine->add_option("--report", report_path, "report path (default <out>/report.json)");

  CLI11_PARSE(app, argc, argv);

  jrefine::cli::RunConfig config;
  jrefine::Diagnostics diags;
  if (!config_file.empty() &&
      !jrefine::cli::load_config_file(config_file, config, diags)) {
    print_diags(diags);
    return 2;
  }

  config.inputs = paths;
  config.out_dir = out_dir;
  if (opt_threshold->count()) config.threshold = threshold;
  if (opt_workers->count()) config.workers = workers;
  if (opt_offline->count()) config.offline = offline;
  if (opt_serial->count()) config.serial = serial;
  if (opt_compile->count()) config.compile_cmd = compile_cmd;
  if (opt_export->count()) config.export_examples_path = export_path;
  if (opt_fixtures->count()) config.provider.fixtures_dir = fixtures_dir;
  if (opt_report->count()) config.report_path = report_path;

  jrefine::cli::PipelineResult result = jrefine::cli::run_pipeline(config);
  print_diags(result.diags);
  if (result.exit_code == 0 && result.report.contains("aggregates")) {
    const auto& agg = result.report["aggregates"];
    std::printf("%s: %d tests -> %d refined across %d files (%d comments, %d renames, %d fallbacks)\n",
                config.out_dir.c_str(), agg["tests_discovered"].get<int>(),
                agg["tests_emitted"].get<int>(), agg["files"].get<int>(),
                agg["comments_placed"].get<int>(),
                agg["identifiers_renamed"].get<int>(),
                agg["fallback_comments_only"].get<int>() +
                    agg["fallback_verbatim"].get<int>());
  }
  return result.exit_code;
}
