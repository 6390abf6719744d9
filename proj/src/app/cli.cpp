#include <CLI11.hpp>

#include "thematic/app/commands.hpp"
#include "thematic/error.hpp"

namespace thematic::app {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embedding-and-LLM assisted thematic analysis of text corpora", "thematic"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string run_dir = "run";
  std::string provider;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool resume = false;
  app.add_option("--run-dir", run_dir, "Run directory (one run per directory)");
  app.add_option("--provider", provider, "Provider kind, overriding the config file")
      ->check(CLI::IsMember({"live", "mock"}));
  app.add_option("--config", config_path, "Run configuration JSON file");
  app.add_option("--seed", seed, "Seed for sampling and mock providers");
  app.add_flag("--resume", resume, "Reuse completed stages and partial results");

  auto* ingest = app.add_subcommand("ingest", "Clean and segment a directory of .txt files");
  std::string input_dir, rules_file;
  ingest->add_option("--input,input", input_dir, "Directory of .txt documents")->required();
  ingest->add_option("--rules", rules_file, "Cleaning rules JSON file");

  auto* induct = app.add_subcommand("induct", "Build a codebook by clustering and summarizing");
  std::optional<std::size_t> k1, k2;
  std::optional<double> t1, t2;
  std::string linkage;
  std::optional<std::size_t> max_cluster_sentences;
  std::optional<std::string> stop_after;
  induct->add_option("--k1", k1, "Round-1 cluster count");
  induct->add_option("--k2", k2, "Round-2 cluster count");
  induct->add_option("--t1", t1, "Round-1 distance threshold");
  induct->add_option("--t2", t2, "Round-2 distance threshold");
  induct->add_option("--linkage", linkage, "Linkage for both rounds")
      ->check(CLI::IsMember({"average", "complete", "single"}));
  induct->add_option("--max-cluster-sentences", max_cluster_sentences, "Sample larger clusters down to this size");
  induct->add_option("--stop-after", stop_after, "Checkpoint and stop after this stage");

  auto* deduct = app.add_subcommand("deduct", "Apply a predefined label set to each sentence");
  std::string label_set;
  std::optional<std::size_t> sample;
  deduct->add_option("--label-set", label_set, "Label set JSON file")->required();
  deduct->add_option("--sample", sample, "Label a seeded random sample of this many sentences");

  auto* check = app.add_subcommand("check", "Have the model rate each applied label");
  std::optional<int> threshold;
  check->add_option("--threshold", threshold, "Flag scores below this value (1-10)");

  auto* review = app.add_subcommand("review", "Export or import the human review sheet");
  review->require_subcommand(1);
  auto* review_export = review->add_subcommand("export", "Write the review sheet");
  std::string export_file;
  bool flagged_only = false;
  review_export->add_option("--file", export_file, "Also write the sheet here");
  review_export->add_flag("--flagged-only", flagged_only, "Only rows flagged by the model");
  auto* review_import = review->add_subcommand("import", "Read a filled-in review sheet");
  std::string import_file;
  review_import->add_option("--file", import_file, "Review sheet CSV")->required();

  auto* report = app.add_subcommand("report", "Summarize agreement between model and reviewers");
  auto* verify = app.add_subcommand("verify", "Check every artifact against its recorded digest");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kConfiguration);
  }

  try {
    Context ctx;
    ctx.run_dir = run_dir;
    ctx.config = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    if (provider == "live") ctx.config.provider.kind = providers::ProviderKind::kLive;
    if (provider == "mock") ctx.config.provider.kind = providers::ProviderKind::kMock;
    ctx.seed = seed;
    ctx.resume = resume;
    ctx.out = &out;

    if (*ingest) {
      cmd_ingest(ctx, input_dir, rules_file);
    } else if (*induct) {
      if (k1 && t1) throw ConfigError("--k1 and --t1 are mutually exclusive");
      if (k2 && t2) throw ConfigError("--k2 and --t2 are mutually exclusive");
      auto& r1 = ctx.config.round1;
      auto& r2 = ctx.config.round2;
      if (!linkage.empty()) r1.linkage = r2.linkage = cluster::linkage_from_string(linkage);
      if (k1) r1.cut = cluster::CountCut{*k1};
      if (t1) r1.cut = cluster::ThresholdCut{*t1};
      if (k2) r2.cut = cluster::CountCut{*k2};
      if (t2) r2.cut = cluster::ThresholdCut{*t2};
      if (max_cluster_sentences) {
        if (*max_cluster_sentences < 1) throw ConfigError("--max-cluster-sentences must be >= 1");
        ctx.config.max_cluster_sentences = *max_cluster_sentences;
      }
      cmd_induct(ctx, stop_after);
    } else if (*deduct) {
      cmd_deduct(ctx, label_set, sample);
    } else if (*check) {
      if (threshold) ctx.config.flag_threshold = *threshold;
      cmd_check(ctx);
    } else if (*review_export) {
      cmd_review_export(ctx, export_file, flagged_only);
    } else if (*review_import) {
      cmd_review_import(ctx, import_file);
    } else if (*report) {
      cmd_report(ctx);
    } else if (*verify) {
      cmd_verify(ctx);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kFailure);
  }
  return 0;
}

}  // namespace thematic::app
