#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "thematic/corpus/corpus.hpp"
#include "thematic/providers/provider.hpp"

namespace thematic::deductive {

enum class PromptKind { kCareers, kFactors };

class LabelSet {
 public:
  LabelSet() = default;
  /// Throws ConfigError on an empty list or labels equal up to case.
  LabelSet(std::string name, std::vector<std::string> labels, PromptKind kind);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  PromptKind kind() const noexcept { return kind_; }

  /// Canonical form of `candidate` under case-insensitive exact match.
  std::optional<std::string> canonical(std::string_view candidate) const;
  /// Largest number of comma-separated pieces any one label spans.
  std::size_t max_comma_span() const noexcept { return max_span_; }

  static LabelSet from_json(const nlohmann::json& j);
  /// Schema errors name `path`.
  static LabelSet load(const std::string& path);
  nlohmann::json to_json() const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  PromptKind kind_ = PromptKind::kCareers;
  std::map<std::string, std::size_t> by_lower_;
  std::size_t max_span_ = 1;
};

struct LabelApplication {
  std::string sent_id;
  std::string label_set;
  std::vector<std::string> labels;
  std::string raw_response;
  std::vector<std::string> unmatched;

  bool operator==(const LabelApplication&) const = default;
};

struct ParsedLabels {
  std::vector<std::string> labels;
  std::vector<std::string> unmatched;
  bool operator==(const ParsedLabels&) const = default;
};

/// Throws ParameterError when the set is not a careers set or the statement is empty.
std::string render_careers_prompt(const LabelSet& set, std::string_view statement);
/// Throws ParameterError when the set is not a factors set or the comment is empty.
std::string render_factors_prompt(const LabelSet& set, std::string_view comment);
/// Dispatches on the set's prompt kind.
std::string render_prompt(const LabelSet& set, std::string_view text);

/// Total parser for labeling replies. Strips an optional "List:" lead-in,
/// maps "N/A" (any case, optional trailing punctuation) to no labels, splits
/// on commas and matches pieces case-insensitively against the set. Adjacent
/// pieces are rejoined when a label itself contains ", ". Unknown pieces go
/// to `unmatched`; matched labels are canonical and deduplicated.
ParsedLabels parse_label_response(std::string_view response, const LabelSet& set);

struct ApplyOptions {
  std::size_t max_in_flight = 1;
  /// Applications recovered from an earlier interrupted run, keyed by sent_id.
  const std::map<std::string, LabelApplication>* completed = nullptr;
  /// Invoked (serialized) as each new application finishes.
  std::function<void(const LabelApplication&)> on_complete;
};

/// One application per sentence, in input order.
std::vector<LabelApplication> apply_label_set(const std::vector<corpus::SentenceRecord>& sentences,
                                              const LabelSet& set, providers::Generator& gen,
                                              const ApplyOptions& opts = {});

/// Label name -> number of sentences it was applied to, in label-set order.
std::vector<std::pair<std::string, std::size_t>> label_histogram(const std::vector<LabelApplication>& apps,
                                                                 const LabelSet& set);

nlohmann::json to_json(const LabelApplication& a);
LabelApplication application_from_json(const nlohmann::json& j);

}  // namespace thematic::deductive
