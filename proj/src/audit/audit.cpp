#include "thematic/audit/audit.hpp"

#include <cmath>
#include <map>
#include <set>

#include "thematic/error.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/util/csv.hpp"
#include "thematic/util/parallel.hpp"
#include "thematic/util/text.hpp"

namespace thematic::audit {

using nlohmann::json;

std::string render_accuracy_prompt(std::string_view label, std::string_view comment) {
  if (text::trim(label).empty()) throw ParameterError("label must be non-empty");
  if (text::trim(comment).empty()) throw ParameterError("comment must be non-empty");
  return prompts::fill(prompts::kAccuracyTemplate,
                       {{"label", std::string(label)}, {"comment", std::string(comment)}});
}

std::optional<int> parse_score(std::string_view response) {
  std::size_t i = 0;
  while (i < response.size() && !(response[i] >= '0' && response[i] <= '9')) ++i;
  if (i == response.size()) return std::nullopt;
  if (i > 0 && response[i - 1] == '-') return std::nullopt;
  long value = 0;
  std::size_t digits = 0;
  while (i < response.size() && response[i] >= '0' && response[i] <= '9') {
    if (++digits > 3) return std::nullopt;
    value = value * 10 + (response[i] - '0');
    ++i;
  }
  if (value < kMinScore || value > kMaxScore) return std::nullopt;
  return static_cast<int>(value);
}

void check_threshold(int threshold) {
  if (threshold < kMinScore || threshold > kMaxScore) {
    throw ParameterError("flag threshold must lie in [1, 10], got " + std::to_string(threshold));
  }
}

AccuracyVerdict rate_label(std::string_view sent_id, std::string_view label, std::string_view comment,
                           providers::Generator& gen, int threshold) {
  check_threshold(threshold);
  const std::string prompt = render_accuracy_prompt(label, comment);
  AccuracyVerdict v{std::string(sent_id), std::string(label), std::nullopt, "", true};
  for (int attempt = 0; attempt < 2 && !v.score; ++attempt) {
    v.raw_response = gen.generate({prompt}).text;
    v.score = parse_score(v.raw_response);
  }
  v.flagged = !v.score || *v.score < threshold;
  return v;
}

std::vector<AccuracyVerdict> rate_applications(const std::vector<deductive::LabelApplication>& apps,
                                               const std::vector<corpus::SentenceRecord>& sentences,
                                               providers::Generator& gen, int threshold,
                                               std::size_t max_in_flight) {
  check_threshold(threshold);
  std::map<std::string, const corpus::SentenceRecord*> by_id;
  for (const auto& s : sentences) by_id.emplace(s.sent_id, &s);

  struct Pair {
    std::string sent_id, label;
    const std::string* comment;
  };
  std::vector<Pair> pairs;
  for (const auto& a : apps) {
    auto it = by_id.find(a.sent_id);
    if (it == by_id.end()) throw ValidationError("label application references unknown sentence " + a.sent_id);
    for (const auto& l : a.labels) pairs.push_back(Pair{a.sent_id, l, &it->second->text});
  }
  std::vector<AccuracyVerdict> out(pairs.size());
  parallel_for(pairs.size(), max_in_flight, [&](std::size_t i) {
    out[i] = rate_label(pairs[i].sent_id, pairs[i].label, *pairs[i].comment, gen, threshold);
  });
  return out;
}

std::vector<AccuracyVerdict> flag_verdicts(const std::vector<AccuracyVerdict>& verdicts, int threshold) {
  check_threshold(threshold);
  std::vector<AccuracyVerdict> out;
  for (const auto& v : verdicts) {
    if (!v.score || *v.score < threshold) out.push_back(v);
  }
  return out;
}

namespace {

double rate3(std::size_t part, std::size_t total) {
  if (total == 0) return 0.0;
  return std::round(1000.0 * static_cast<double>(part) / static_cast<double>(total)) / 1000.0;
}

}  // namespace

AgreementReport agreement_report(const std::vector<AccuracyVerdict>& verdicts,
                                 const std::vector<HumanReview>& reviews, int threshold) {
  check_threshold(threshold);
  std::set<std::pair<std::string, std::string>> known;
  AgreementReport r;
  r.flag_threshold = threshold;
  r.rated = verdicts.size();
  for (const auto& v : verdicts) {
    known.emplace(v.sent_id, v.label);
    if (!v.score || *v.score < threshold) ++r.flagged;
    if (v.score && *v.score >= threshold && *v.score <= kGrayZoneUpper) ++r.gray_zone;
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& rv : reviews) {
    auto key = std::make_pair(rv.sent_id, rv.label);
    if (!known.count(key)) {
      throw ValidationError("review for (" + rv.sent_id + ", " + rv.label + ") has no matching verdict");
    }
    if (!seen.insert(key).second) {
      throw ValidationError("(" + rv.sent_id + ", " + rv.label + ") is reviewed more than once");
    }
    switch (rv.verdict) {
      case Verdict::kAgreement: ++r.agreement; break;
      case Verdict::kDisagreement: ++r.disagreement; break;
      case Verdict::kQuestionable: ++r.questionable; break;
    }
  }
  r.total = reviews.size();
  r.empty = r.total == 0;
  r.agreement_rate = rate3(r.agreement, r.total);
  r.disagreement_rate = rate3(r.disagreement, r.total);
  r.questionable_rate = rate3(r.questionable, r.total);
  r.unreviewed = known.size() - seen.size();
  return r;
}

std::string export_review_sheet(const std::vector<AccuracyVerdict>& verdicts, bool flagged_only) {
  std::string out(kReviewHeader);
  out.push_back('\n');
  for (const auto& v : verdicts) {
    if (flagged_only && !v.flagged) continue;
    out += csv::format_row({v.sent_id, v.label, v.score ? std::to_string(*v.score) : "",
                            v.flagged ? "true" : "false", ""});
  }
  return out;
}

std::vector<HumanReview> import_review_sheet(std::string_view csv_text) {
  std::vector<std::size_t> lines;
  auto rows = csv::parse(csv_text, &lines);
  if (rows.empty() || text::join(rows[0], ",") != kReviewHeader) {
    throw ValidationError("review sheet must start with header '" + std::string(kReviewHeader) + "'");
  }
  std::vector<HumanReview> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "review sheet line " + std::to_string(lines[r]);
    if (row.size() != 5) {
      throw ValidationError(where + ": expected 5 fields, found " + std::to_string(row.size()));
    }
    std::string_view verdict = text::trim(row[4]);
    if (verdict.empty()) continue;
    try {
      out.push_back(HumanReview{row[0], row[1], verdict_from_string(verdict)});
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kAgreement: return "agreement";
    case Verdict::kDisagreement: return "disagreement";
    case Verdict::kQuestionable: return "questionable";
  }
  return "agreement";
}

Verdict verdict_from_string(std::string_view s) {
  if (text::iequals(s, "agreement")) return Verdict::kAgreement;
  if (text::iequals(s, "disagreement")) return Verdict::kDisagreement;
  if (text::iequals(s, "questionable")) return Verdict::kQuestionable;
  throw ValidationError("unknown verdict '" + std::string(s) +
                        "' (expected agreement, disagreement or questionable)");
}

json to_json(const AccuracyVerdict& v) {
  return json{{"sent_id", v.sent_id},
              {"label", v.label},
              {"score", v.score ? json(*v.score) : json(nullptr)},
              {"raw_response", v.raw_response},
              {"flagged", v.flagged}};
}

AccuracyVerdict verdict_from_json(const json& j) {
  AccuracyVerdict v;
  v.sent_id = j.at("sent_id").get<std::string>();
  v.label = j.at("label").get<std::string>();
  if (j.contains("score") && !j.at("score").is_null()) v.score = j.at("score").get<int>();
  v.raw_response = j.value("raw_response", std::string());
  v.flagged = j.at("flagged").get<bool>();
  return v;
}

json to_json(const AgreementReport& r) {
  return json{{"counts", {{"agreement", r.agreement}, {"disagreement", r.disagreement}, {"questionable", r.questionable}}},
              {"total", r.total},
              {"rates", {{"agreement", r.agreement_rate}, {"disagreement", r.disagreement_rate}, {"questionable", r.questionable_rate}}},
              {"agreement_rate", r.agreement_rate},
              {"empty", r.empty},
              {"flag_threshold", r.flag_threshold},
              {"rated", r.rated},
              {"flagged", r.flagged},
              {"gray_zone", r.gray_zone},
              {"unreviewed", r.unreviewed}};
}

}  // namespace thematic::audit
