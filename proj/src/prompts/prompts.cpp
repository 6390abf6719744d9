#include "thematic/prompts/prompts.hpp"

namespace thematic::prompts {
namespace {

std::string_view head(std::string_view tmpl) { return tmpl.substr(0, tmpl.find('{')); }

}  // namespace

std::string fill(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        std::string_view name = tmpl.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto& [key, value] : slots) {
          if (key == name) {
            out += value;
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string bulleted(std::string_view preamble, const std::vector<std::string>& items) {
  std::string out(preamble);
  for (const auto& item : items) {
    out += "\n- ";
    out += item;
  }
  return out;
}

std::string labels_string(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out;
}

PromptKind classify(std::string_view prompt) {
  if (prompt.starts_with(kSummaryPreamble)) return PromptKind::kSummary;
  if (prompt.starts_with(kLabelPreamble)) return PromptKind::kLabel;
  if (prompt.starts_with(head(kCareersTemplate))) return PromptKind::kCareers;
  if (prompt.starts_with(head(kFactorsTemplate))) return PromptKind::kFactors;
  if (prompt.starts_with(head(kAccuracyTemplate))) return PromptKind::kAccuracy;
  return PromptKind::kUnknown;
}

std::vector<std::string> bullet_items(std::string_view prompt) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while ((pos = prompt.find("\n- ", pos)) != std::string_view::npos) {
    pos += 3;
    std::size_t end = prompt.find("\n- ", pos);
    items.emplace_back(prompt.substr(pos, end == std::string_view::npos ? end : end - pos));
  }
  return items;
}

nlohmann::json templates_json() {
  return nlohmann::json{{"summary", kSummaryPreamble},   {"label", kLabelPreamble},
                        {"careers", kCareersTemplate},  {"factors", kFactorsTemplate},
                        {"accuracy", kAccuracyTemplate}};
}

}  // namespace thematic::prompts
