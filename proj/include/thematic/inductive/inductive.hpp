#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thematic/cluster/cluster.hpp"
#include "thematic/corpus/corpus.hpp"
#include "thematic/providers/provider.hpp"
#include "thematic/store.hpp"

namespace thematic::inductive {

/// Summaries longer than this are kept but flagged.
inline constexpr std::size_t kSummaryWordLimit = 15;
/// Hard bound on theme label length.
inline constexpr std::size_t kLabelMaxWords = 8;
inline constexpr std::size_t kDefaultMaxClusterSentences = 40;

struct ClusterSummary {
  std::size_t cluster_id = 0;
  std::string summary_text;
  std::string raw_response;
  std::vector<std::string> member_sent_ids;
  bool unparsed = false;
  bool sampled = false;
  bool overlength = false;

  bool operator==(const ClusterSummary&) const = default;
};

struct ThemeLabel {
  std::size_t theme_id = 0;
  std::string label_text;
  std::string raw_response;
  std::vector<std::size_t> member_summary_ids;
  bool unparsed = false;

  bool operator==(const ThemeLabel&) const = default;
};

struct Exemplar {
  std::string sent_id;
  std::string text;
  bool operator==(const Exemplar&) const = default;
};

struct CodebookEntry {
  ClusterSummary summary;
  std::vector<Exemplar> exemplars;
  bool operator==(const CodebookEntry&) const = default;
};

struct Theme {
  ThemeLabel label;
  std::vector<CodebookEntry> summaries;
  bool operator==(const Theme&) const = default;
};

struct Codebook {
  std::vector<Theme> themes;
  bool operator==(const Codebook&) const = default;
};

struct SummaryResult {
  std::string summary_text;
  std::string raw_response;
  bool unparsed = false;
  bool sampled = false;
  bool overlength = false;
};

struct LabelResult {
  std::string label_text;
  std::string raw_response;
  bool unparsed = false;
};

std::string render_summary_prompt(const std::vector<std::string>& sentences);
std::string render_label_prompt(const std::vector<std::string>& summaries);

/// Removes a leading "Commonality:" marker (case-insensitive) and trims.
/// `found` reports whether the marker was present.
std::string strip_commonality(std::string_view response, bool* found = nullptr);
/// Trims, removes an optional "Label:" marker, surrounding quotes and a trailing period.
std::string clean_label(std::string_view response);

/// Summarizes one cluster. Clusters larger than `max_sentences` are
/// uniformly sampled with `seed`. A reply without the marker is retried
/// once; a second miss is kept as an unparsed summary.
SummaryResult summarize_cluster(const std::vector<std::string>& sentences, providers::Generator& gen,
                                std::size_t max_sentences = kDefaultMaxClusterSentences,
                                std::uint64_t seed = 0);

/// Labels one group of summaries. Empty or over-long labels are retried once,
/// then recorded as unparsed (truncated to the word bound, or a placeholder).
LabelResult label_theme(const std::vector<std::string>& summaries, providers::Generator& gen);

struct InductiveConfig {
  cluster::ClusterParams round1;
  cluster::ClusterParams round2;
  std::size_t max_cluster_sentences = kDefaultMaxClusterSentences;
  std::uint64_t seed = 0;
  /// Reuse completed stages found in the store.
  bool resume = false;
  /// Stop after this stage (used to checkpoint mid-run).
  std::optional<std::string> stop_after;
};

/// Stage names, in execution order.
inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> kStages = {"embed_round1",  "cluster_round1", "summarize_round1",
                                                   "embed_round2",  "cluster_round2", "label_themes",
                                                   "codebook"};
  return kStages;
}

/// Embeds and clusters sentences, summarizes each cluster, embeds and
/// clusters the summaries, labels each summary cluster, and assembles the
/// codebook. With a store, every intermediate artifact is persisted and
/// completed stages can be resumed. Returns nullopt when stopped early.
std::optional<Codebook> run_inductive(const corpus::Corpus& corpus, const InductiveConfig& cfg,
                                      providers::Embedder& embedder, providers::Generator& gen,
                                      StageStore* store = nullptr);

nlohmann::json to_json(const ClusterSummary& s);
ClusterSummary summary_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ThemeLabel& t);
ThemeLabel theme_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Codebook& c);
Codebook codebook_from_json(const nlohmann::json& j);

}  // namespace thematic::inductive
