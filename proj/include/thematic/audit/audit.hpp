#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "thematic/corpus/corpus.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/providers/provider.hpp"

namespace thematic::audit {

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 10;
inline constexpr int kDefaultFlagThreshold = 4;
/// Scores in [threshold, kGrayZoneUpper] are counted as the gray zone.
inline constexpr int kGrayZoneUpper = 6;

struct AccuracyVerdict {
  std::string sent_id;
  std::string label;
  /// Absent when no score in range could be parsed after one reprompt.
  std::optional<int> score;
  std::string raw_response;
  bool flagged = true;

  bool operator==(const AccuracyVerdict&) const = default;
};

enum class Verdict { kAgreement, kDisagreement, kQuestionable };

struct HumanReview {
  std::string sent_id;
  std::string label;
  Verdict verdict = Verdict::kAgreement;

  bool operator==(const HumanReview&) const = default;
};

struct AgreementReport {
  std::size_t agreement = 0;
  std::size_t disagreement = 0;
  std::size_t questionable = 0;
  std::size_t total = 0;
  /// Rounded to three decimals; 0 when total is 0.
  double agreement_rate = 0.0;
  double disagreement_rate = 0.0;
  double questionable_rate = 0.0;
  bool empty = true;

  int flag_threshold = kDefaultFlagThreshold;
  std::size_t rated = 0;
  std::size_t flagged = 0;
  std::size_t gray_zone = 0;
  std::size_t unreviewed = 0;
};

std::string render_accuracy_prompt(std::string_view label, std::string_view comment);

/// First integer token of `response`, if it lies in [1, 10].
std::optional<int> parse_score(std::string_view response);

/// Throws ParameterError unless 1 <= threshold <= 10.
void check_threshold(int threshold);

/// Rates one applied label. An unparseable reply is retried once; a second
/// failure yields a verdict without score, flagged.
AccuracyVerdict rate_label(std::string_view sent_id, std::string_view label, std::string_view comment,
                           providers::Generator& gen, int threshold = kDefaultFlagThreshold);

/// Rates every (sentence, label) pair of `apps`, in application order.
std::vector<AccuracyVerdict> rate_applications(const std::vector<deductive::LabelApplication>& apps,
                                               const std::vector<corpus::SentenceRecord>& sentences,
                                               providers::Generator& gen, int threshold,
                                               std::size_t max_in_flight);

/// Verdicts scoring below `threshold` (or without score), input order kept.
std::vector<AccuracyVerdict> flag_verdicts(const std::vector<AccuracyVerdict>& verdicts, int threshold);

/// Tallies human reviews. Throws ValidationError naming any review whose
/// (sent_id, label) has no verdict, or any pair reviewed twice.
AgreementReport agreement_report(const std::vector<AccuracyVerdict>& verdicts,
                                 const std::vector<HumanReview>& reviews,
                                 int threshold = kDefaultFlagThreshold);

inline constexpr std::string_view kReviewHeader = "sent_id,label,score,flagged,verdict";

/// CSV with kReviewHeader and a blank verdict column for the reviewer.
std::string export_review_sheet(const std::vector<AccuracyVerdict>& verdicts, bool flagged_only = false);
/// Rows with a blank verdict are skipped. Throws ValidationError naming the
/// line of any unknown verdict or malformed row.
std::vector<HumanReview> import_review_sheet(std::string_view csv_text);

std::string to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

nlohmann::json to_json(const AccuracyVerdict& v);
AccuracyVerdict verdict_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AgreementReport& r);

}  // namespace thematic::audit
