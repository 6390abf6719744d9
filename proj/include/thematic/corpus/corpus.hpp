#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace thematic::corpus {

/// Text cleaning configuration. Patterns use ECMAScript regex syntax.
struct CleaningRules {
  std::string parenthetical_pattern = R"(\([^()]*\))";
  std::vector<std::string> redaction_patterns;
  /// Drop standalone lines without terminal punctuation that are followed by a blank line.
  bool heading_rule = true;
  std::vector<std::string> abbreviations = default_abbreviations();

  static std::vector<std::string> default_abbreviations();

  /// Parses the rules file schema. Missing keys keep their defaults.
  static CleaningRules from_json(const nlohmann::json& j);
  static CleaningRules load(const std::string& path);
  nlohmann::json to_json() const;
};

struct Document {
  std::string doc_id;
  std::string raw_text;
  std::string cleaned_text;
};

struct SentenceRecord {
  std::string sent_id;
  std::string doc_id;
  std::size_t index = 0;
  std::string text;

  bool operator==(const SentenceRecord&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<SentenceRecord> sentences;
};

/// Records shorter than this (after trimming) are discarded.
inline constexpr std::size_t kMinSentenceChars = 3;

std::string make_sent_id(const std::string& doc_id, std::size_t index);

/// Removes headings, parenthetical matches and redaction matches, then
/// collapses whitespace. Applied to a fixed point, so the result is idempotent.
/// Throws ConfigError naming any pattern that fails to compile.
std::string clean_text(const std::string& raw, const CleaningRules& rules);

/// Splits cleaned text at '.', '!' or '?' (plus trailing closing quotes or
/// brackets) followed by whitespace and an uppercase letter or opening
/// quote, unless the token ending there is a listed abbreviation.
std::vector<SentenceRecord> segment_sentences(const Document& doc,
                                              const std::vector<std::string>& abbreviations =
                                                  CleaningRules::default_abbreviations());

Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& inputs,
                    const CleaningRules& rules);

/// Reads every `*.txt` in `dir` (sorted by filename); the stem is the doc id.
std::vector<std::pair<std::string, std::string>> read_text_directory(const std::string& dir);

nlohmann::json to_json(const SentenceRecord& s);
SentenceRecord sentence_from_json(const nlohmann::json& j);

}  // namespace thematic::corpus
