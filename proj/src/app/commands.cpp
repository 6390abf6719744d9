#include "thematic/app/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "thematic/app/run_dir.hpp"
#include "thematic/audit/audit.hpp"
#include "thematic/corpus/corpus.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/error.hpp"
#include "thematic/inductive/inductive.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/providers/backend.hpp"
#include "thematic/providers/provider.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/random.hpp"
#include "thematic/util/text.hpp"

namespace thematic::app {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSentences = "sentences.jsonl";
constexpr const char* kDocuments = "documents.jsonl";
constexpr const char* kRules = "rules.json";
constexpr const char* kLabels = "labels.jsonl";
constexpr const char* kLabelsPartial = "labels.partial.jsonl";
constexpr const char* kLabelSet = "label_set.json";
constexpr const char* kVerdicts = "verdicts.jsonl";
constexpr const char* kReviewSheet = "review.csv";
constexpr const char* kReviews = "reviews.jsonl";
constexpr const char* kReport = "report.json";
constexpr const char* kCallLog = "calls.jsonl";

// Stages that depend on each producing stage.
const std::map<std::string, std::vector<std::string>>& downstream() {
  static const std::map<std::string, std::vector<std::string>> kMap = [] {
    std::map<std::string, std::vector<std::string>> m;
    std::vector<std::string> all = inductive::stage_names();
    for (const char* s : {"deduct", "check", "review_export", "review", "report"}) all.push_back(s);
    m["ingest"] = all;
    m["deduct"] = {"check", "review_export", "review", "report"};
    m["check"] = {"review_export", "review", "report"};
    m["review"] = {"report"};
    return m;
  }();
  return kMap;
}

void complete(RunDir& run, const std::string& stage, const std::vector<std::string>& artifacts) {
  auto it = downstream().find(stage);
  if (it != downstream().end()) {
    for (const auto& later : it->second) run.invalidate(later);
  }
  run.mark_complete(stage, artifacts);
}

std::ostream& out(const Context& ctx) {
  static std::ofstream null_sink;
  return ctx.out ? *ctx.out : null_sink;
}

std::uint64_t run_seed(const Context& ctx, const RunDir& run) {
  if (ctx.seed) return *ctx.seed;
  const json& m = run.manifest();
  if (m.contains("seed")) return m.at("seed").get<std::uint64_t>();
  return ctx.config.seed;
}

struct Providers {
  providers::ProviderConfig cfg;
  std::unique_ptr<providers::CallLog> log;
  std::unique_ptr<providers::Embedder> embedder;
  std::unique_ptr<providers::Generator> generator;
};

Providers open_providers(const Context& ctx, RunDir& run, std::uint64_t seed, bool need_embedder) {
  Providers p;
  p.cfg = ctx.config.provider;
  if (!p.cfg.seed) p.cfg.seed = seed;
  p.cfg.validate();
  p.log = std::make_unique<providers::CallLog>(run.file(kCallLog));
  if (need_embedder) {
    p.embedder = std::make_unique<providers::Embedder>(providers::make_embedding_backend(p.cfg), p.cfg, p.log.get());
  }
  p.generator =
      std::make_unique<providers::Generator>(providers::make_generative_backend(p.cfg), p.cfg, p.log.get());

  json identities = run.manifest().value("providers", json::object());
  identities["generative"] = p.generator->identity();
  if (p.embedder) identities["embedding"] = p.embedder->identity();
  run.set_field("providers", identities);
  run.set_field("config_digest", ctx.config.digest());
  return p;
}

std::vector<corpus::SentenceRecord> load_sentences(RunDir& run) {
  std::vector<corpus::SentenceRecord> out;
  for (const auto& line : text::split(run.read_artifact(kSentences), '\n')) {
    if (text::trim(line).empty()) continue;
    out.push_back(corpus::sentence_from_json(json::parse(line)));
  }
  return out;
}

template <typename T, typename F>
std::vector<T> load_rows(RunDir& run, const std::string& name, F from_json) {
  std::vector<T> out;
  for (const auto& line : text::split(run.read_artifact(name), '\n')) {
    if (text::trim(line).empty()) continue;
    out.push_back(from_json(json::parse(line)));
  }
  return out;
}

template <typename T>
std::string to_jsonl(const std::vector<T>& rows) {
  std::string s;
  for (const auto& r : rows) {
    if constexpr (std::is_same_v<T, corpus::SentenceRecord>) {
      s += io::dump(corpus::to_json(r));
    } else if constexpr (std::is_same_v<T, deductive::LabelApplication>) {
      s += io::dump(deductive::to_json(r));
    } else {
      s += io::dump(audit::to_json(r));
    }
    s.push_back('\n');
  }
  return s;
}

int flag_threshold(const Context& ctx, const RunDir& run) {
  const json& m = run.manifest();
  if (m.contains("flag_threshold")) return m.at("flag_threshold").get<int>();
  return ctx.config.flag_threshold;
}

}  // namespace

void cmd_ingest(const Context& ctx, const std::string& input_dir, const std::string& rules_file) {
  corpus::CleaningRules rules = rules_file.empty() ? corpus::CleaningRules{} : corpus::CleaningRules::load(rules_file);
  auto inputs = corpus::read_text_directory(input_dir);
  if (inputs.empty()) throw ConfigError("no documents: " + input_dir + " contains no .txt files");
  corpus::Corpus c = corpus::build_corpus(inputs, rules);

  RunDir run(ctx.run_dir, true);
  const std::uint64_t seed = ctx.seed.value_or(ctx.config.seed);
  run.set_field("seed", seed);

  std::string docs;
  for (const auto& d : c.documents) {
    docs += io::dump(json{{"doc_id", d.doc_id}, {"cleaned_text", d.cleaned_text}});
    docs.push_back('\n');
  }
  const std::string sentences = to_jsonl(c.sentences);
  const std::string rules_json = io::dump_pretty(rules.to_json());

  const json& stages = run.manifest().at("stages");
  const bool unchanged = stages.contains("ingest") && run.has_artifact(kSentences) && run.has_artifact(kRules) &&
                         stages.at("ingest").at("artifacts").value(kSentences, "") == sha256_hex(sentences) &&
                         stages.at("ingest").at("artifacts").value(kRules, "") == sha256_hex(rules_json);
  run.write_artifact(kDocuments, docs);
  run.write_artifact(kSentences, sentences);
  run.write_artifact(kRules, rules_json);
  if (unchanged) {
    run.mark_complete("ingest", {kDocuments, kSentences, kRules});
  } else {
    complete(run, "ingest", {kDocuments, kSentences, kRules});
  }
  run.set_field("rules_digest", sha256_hex(rules_json));
  run.append_event("ingest", json{{"input_dir", input_dir}, {"documents", c.documents.size()},
                                  {"sentences", c.sentences.size()}});
  out(ctx) << c.documents.size() << " documents, " << c.sentences.size() << " sentences\n";
}

void cmd_induct(const Context& ctx, const std::optional<std::string>& stop_after) {
  RunDir run(ctx.run_dir, false);
  run.require("ingest", "ingest");
  corpus::Corpus c;
  c.sentences = load_sentences(run);
  const std::uint64_t seed = run_seed(ctx, run);
  Providers p = open_providers(ctx, run, seed, true);

  run.set_field("cluster_params",
                json{{"round1", cluster::to_json(ctx.config.round1)}, {"round2", cluster::to_json(ctx.config.round2)}});
  run.set_field("prompt_templates", prompts::templates_json());

  inductive::InductiveConfig icfg{ctx.config.round1, ctx.config.round2, ctx.config.max_cluster_sentences,
                                  seed, ctx.resume, stop_after};
  auto book = inductive::run_inductive(c, icfg, *p.embedder, *p.generator, &run);
  run.append_event("induct", json{{"seed", seed}, {"resume", ctx.resume}, {"provider_calls", p.log->size()}});
  if (!book) {
    out(ctx) << "stopped after " << *stop_after << "\n";
    return;
  }
  std::size_t summaries = 0;
  for (const auto& t : book->themes) summaries += t.summaries.size();
  out(ctx) << book->themes.size() << " themes, " << summaries << " summaries, " << c.sentences.size()
           << " sentences -> " << run.file("codebook.json") << "\n";
  for (const auto& t : book->themes) {
    out(ctx) << "  [" << t.label.theme_id << "] " << t.label.label_text << " (" << t.summaries.size()
             << " summaries)\n";
  }
}

void cmd_deduct(const Context& ctx, const std::string& label_set_file, std::optional<std::size_t> sample) {
  deductive::LabelSet set = deductive::LabelSet::load(label_set_file);
  RunDir run(ctx.run_dir, false);
  run.require("ingest", "ingest");
  std::vector<corpus::SentenceRecord> sentences = load_sentences(run);
  const std::uint64_t seed = run_seed(ctx, run);
  if (sample) {
    if (*sample < 1 || *sample > sentences.size()) {
      throw ParameterError("--sample " + std::to_string(*sample) + " outside [1, " +
                           std::to_string(sentences.size()) + "]");
    }
    std::vector<corpus::SentenceRecord> picked;
    for (std::size_t i : sample_indices(sentences.size(), *sample, seed)) picked.push_back(sentences[i]);
    sentences = std::move(picked);
  }
  Providers p = open_providers(ctx, run, seed, false);

  const std::string set_json = io::dump_pretty(set.to_json());
  std::map<std::string, deductive::LabelApplication> done;
  const bool same_set = run.has_artifact(kLabelSet) && run.read_artifact(kLabelSet) == set_json;
  if (ctx.resume && same_set && run.has_artifact(kLabelsPartial)) {
    for (const auto& line : text::split(run.read_artifact(kLabelsPartial), '\n')) {
      if (text::trim(line).empty()) continue;
      try {
        auto a = deductive::application_from_json(json::parse(line));
        done.emplace(a.sent_id, std::move(a));
      } catch (const json::exception&) {
        // A line cut short by an interruption; that sentence is redone.
      }
    }
  } else {
    std::error_code ec;
    fs::remove(run.file(kLabelsPartial), ec);
  }
  run.write_artifact(kLabelSet, set_json);

  std::ofstream partial(run.file(kLabelsPartial), std::ios::app);
  deductive::ApplyOptions opts;
  opts.max_in_flight = p.cfg.max_in_flight;
  opts.completed = &done;
  opts.on_complete = [&](const deductive::LabelApplication& a) {
    partial << io::dump(deductive::to_json(a)) << '\n';
    partial.flush();
  };
  auto apps = deductive::apply_label_set(sentences, set, *p.generator, opts);
  partial.close();

  run.write_artifact(kLabels, to_jsonl(apps));
  complete(run, "deduct", {kLabels, kLabelSet});
  std::error_code ec;
  fs::remove(run.file(kLabelsPartial), ec);
  run.set_field("deduct", json{{"label_set", set.name()},
                               {"sample", sample ? json(*sample) : json(nullptr)},
                               {"seed", seed}});
  run.set_field("prompt_templates", prompts::templates_json());
  run.append_event("deduct", json{{"sentences", apps.size()}, {"resumed", done.size()}});

  std::size_t total = 0, unmatched = 0;
  for (const auto& a : apps) {
    total += a.labels.size();
    unmatched += a.unmatched.size();
  }
  out(ctx) << apps.size() << " sentences labeled with " << set.name() << ", " << total << " labels applied";
  if (unmatched) out(ctx) << ", " << unmatched << " unmatched";
  out(ctx) << "\n";
  for (const auto& [label, count] : deductive::label_histogram(apps, set)) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%6zu  ", count);
    out(ctx) << buf << label << "\n";
  }
}

void cmd_check(const Context& ctx) {
  RunDir run(ctx.run_dir, false);
  run.require("deduct", "deduct");
  const int threshold = ctx.config.flag_threshold;
  audit::check_threshold(threshold);
  auto apps = load_rows<deductive::LabelApplication>(run, kLabels, deductive::application_from_json);
  auto sentences = load_sentences(run);
  Providers p = open_providers(ctx, run, run_seed(ctx, run), false);

  auto verdicts = audit::rate_applications(apps, sentences, *p.generator, threshold, p.cfg.max_in_flight);
  run.write_artifact(kVerdicts, to_jsonl(verdicts));
  complete(run, "check", {kVerdicts});
  run.set_field("flag_threshold", threshold);
  run.append_event("check", json{{"ratings", verdicts.size()}});

  auto report = audit::agreement_report(verdicts, {}, threshold);
  out(ctx) << report.rated << " ratings, " << report.flagged << " flagged below " << threshold << ", "
           << report.gray_zone << " in gray zone (" << threshold << "-" << audit::kGrayZoneUpper << ")\n";
}

void cmd_review_export(const Context& ctx, const std::string& file, bool flagged_only) {
  RunDir run(ctx.run_dir, false);
  run.require("check", "check");
  auto verdicts = load_rows<audit::AccuracyVerdict>(run, kVerdicts, audit::verdict_from_json);
  const std::string sheet = audit::export_review_sheet(verdicts, flagged_only);
  run.write_artifact(kReviewSheet, sheet);
  complete(run, "review_export", {kReviewSheet});
  std::string dest = run.file(kReviewSheet);
  if (!file.empty()) {
    io::atomic_write(file, sheet);
    dest = file;
  }
  std::size_t rows = 0;
  for (const auto& v : verdicts) rows += (!flagged_only || v.flagged) ? 1 : 0;
  out(ctx) << rows << " rows -> " << dest << "\n";
}

void cmd_review_import(const Context& ctx, const std::string& file) {
  RunDir run(ctx.run_dir, false);
  run.require("check", "check");
  auto verdicts = load_rows<audit::AccuracyVerdict>(run, kVerdicts, audit::verdict_from_json);
  auto reviews = audit::import_review_sheet(text::read_file(file));
  audit::agreement_report(verdicts, reviews, flag_threshold(ctx, run));

  std::string rows;
  for (const auto& r : reviews) {
    rows += io::dump(json{{"sent_id", r.sent_id}, {"label", r.label}, {"verdict", audit::to_string(r.verdict)}});
    rows.push_back('\n');
  }
  run.write_artifact(kReviews, rows);
  complete(run, "review", {kReviews});
  run.append_event("review_import", json{{"file", file}, {"reviews", reviews.size()}});
  out(ctx) << reviews.size() << " reviews imported\n";
}

void cmd_report(const Context& ctx) {
  RunDir run(ctx.run_dir, false);
  run.require("check", "check");
  auto verdicts = load_rows<audit::AccuracyVerdict>(run, kVerdicts, audit::verdict_from_json);
  std::vector<audit::HumanReview> reviews;
  if (run.stage_complete("review")) {
    reviews = load_rows<audit::HumanReview>(run, kReviews, [](const json& j) {
      return audit::HumanReview{j.at("sent_id").get<std::string>(), j.at("label").get<std::string>(),
                                audit::verdict_from_string(j.at("verdict").get<std::string>())};
    });
  }
  auto report = audit::agreement_report(verdicts, reviews, flag_threshold(ctx, run));
  run.write_artifact(kReport, io::dump_pretty(audit::to_json(report)));
  complete(run, "report", {kReport});

  char rate[32];
  std::snprintf(rate, sizeof rate, "%.1f%%", report.agreement_rate * 100.0);
  if (report.empty) {
    out(ctx) << "no reviews imported (empty report); ";
  } else {
    out(ctx) << report.total << " reviewed: " << report.agreement << " agreement (" << rate << "), "
             << report.disagreement << " disagreement, " << report.questionable << " questionable; ";
  }
  out(ctx) << report.flagged << " of " << report.rated << " flagged, " << report.gray_zone << " in gray zone, "
           << report.unreviewed << " unreviewed\n";
}

void cmd_verify(const Context& ctx) {
  RunDir run(ctx.run_dir, false);
  auto problems = run.verify();
  if (!problems.empty()) {
    std::string msg = "artifact changed:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw StageError(msg);
  }
  out(ctx) << "all " << run.manifest().at("stages").size() << " stages verified\n";
}

}  // namespace thematic::app
