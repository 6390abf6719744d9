#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace thematic::prompts {

// Cluster summarization. The comments block follows, one "- " bullet per line.
inline constexpr std::string_view kSummaryPreamble =
    "The following comments were written in response to the question 'Please describe your "
    "future career interests.'. What do they have in common? Keep your response under 15 words. "
    "Start your response with 'Commonality: '. \n COMMENTS:";
inline constexpr std::string_view kSummaryMarker = "Commonality:";

// Theme labeling over a group of cluster summaries.
inline constexpr std::string_view kLabelPreamble =
    "The following summaries describe a common theme. Provide a three- to five-word label for "
    "the theme. Start your response with 'Label: '. \n SUMMARIES:";
inline constexpr std::string_view kLabelMarker = "Label:";

// Deductive labeling against a career title list. Slots: {labels_string}, {statement}.
inline constexpr std::string_view kCareersTemplate =
    "The following comment was written in response to the question 'Please describe your future "
    "career interests'. Pick the career from the labels in square brackets that I provide you "
    "that is expressed in the students' written response. If there is more than one career "
    "expressed in the response, separate each with a comma. If no career from the list is "
    "present in the comment, say 'N/A'. CAREERS LIST: [{labels_string}].\n\nSTATEMENT: {statement}";

// Deductive labeling against career satisfaction factors. Slots: {labels_string}, {comment}.
inline constexpr std::string_view kFactorsTemplate =
    "The list in square brackets contains factors associated with career satisfaction.\n\n"
    "Career satisfaction factors: [{labels_string}].\n\n"
    "Does the following comment mention any or these factors? If so, respond by saying \"List: \" "
    "followed by a list with the factors separated by commas. If not, write \"N/A\".\n\n"
    "COMMENT: {comment}";
inline constexpr std::string_view kListMarker = "List:";

// Self-accuracy rating of a previously applied label. Slots: {label}, {comment}.
inline constexpr std::string_view kAccuracyTemplate =
    "On a scale from 1 (completely inaccurate) to 10 (completely accurate), rate the accuracy of "
    "the following topic label for describing one of the things a student said about factors "
    "important for their career interests. Only provide your numeric rating.\n\n"
    "LABEL: {label}.\n\n"
    "COMMENT: {comment}.";

enum class PromptKind { kSummary, kLabel, kCareers, kFactors, kAccuracy, kUnknown };

/// Substitutes `{name}` slots in a single pass over the template; inserted
/// values are never rescanned. Unknown slots are left as-is.
std::string fill(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& slots);

/// `preamble` followed by "\n- item" for each item.
std::string bulleted(std::string_view preamble, const std::vector<std::string>& items);

/// Comma-space join used for the `{labels_string}` slot.
std::string labels_string(const std::vector<std::string>& labels);

PromptKind classify(std::string_view prompt);

/// The items of a bulleted prompt (summary or label kinds).
std::vector<std::string> bullet_items(std::string_view prompt);

/// Every template, for run manifests.
nlohmann::json templates_json();

}  // namespace thematic::prompts
