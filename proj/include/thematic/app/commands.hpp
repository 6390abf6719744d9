#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thematic/app/run_config.hpp"

namespace thematic::app {

/// Shared state of one command invocation.
struct Context {
  std::string run_dir;
  RunConfig config;
  /// From --seed. When absent, ingest uses config.seed and later commands
  /// reuse the seed recorded in the manifest.
  std::optional<std::uint64_t> seed;
  bool resume = false;
  std::ostream* out = nullptr;
};

/// Reads every *.txt file of `input_dir`, cleans and segments it, and writes
/// documents.jsonl and sentences.jsonl. An empty `rules_file` uses the
/// default cleaning rules.
void cmd_ingest(const Context& ctx, const std::string& input_dir, const std::string& rules_file);

/// Runs the inductive pipeline with ctx.config.round1/round2. Stops after
/// `stop_after` when given.
void cmd_induct(const Context& ctx, const std::optional<std::string>& stop_after = std::nullopt);

/// Applies a label set to every sentence, or to `sample` sentences drawn
/// with the run seed.
void cmd_deduct(const Context& ctx, const std::string& label_set_file, std::optional<std::size_t> sample);

/// Rates every (sentence, label) pair and flags scores below ctx.config.flag_threshold.
void cmd_check(const Context& ctx);

void cmd_review_export(const Context& ctx, const std::string& file, bool flagged_only);
void cmd_review_import(const Context& ctx, const std::string& file);

/// Writes report.json over the imported reviews (none yet is allowed).
void cmd_report(const Context& ctx);

/// Re-hashes every artifact listed in the manifest. Throws StageError on any mismatch.
void cmd_verify(const Context& ctx);

/// Full command line entry point. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thematic::app
