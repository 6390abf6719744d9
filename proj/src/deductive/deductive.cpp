#include "thematic/deductive/deductive.hpp"

#include <algorithm>
#include <mutex>

#include "thematic/error.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/parallel.hpp"
#include "thematic/util/text.hpp"

namespace thematic::deductive {

using nlohmann::json;

LabelSet::LabelSet(std::string name, std::vector<std::string> labels, PromptKind kind)
    : name_(std::move(name)), labels_(std::move(labels)), kind_(kind) {
  if (labels_.empty()) throw ConfigError("label set '" + name_ + "' has no labels");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    std::string trimmed(text::trim(labels_[i]));
    if (trimmed.empty()) throw ConfigError("label set '" + name_ + "' has an empty label");
    if (!by_lower_.emplace(text::to_lower(trimmed), i).second) {
      throw ConfigError("label set '" + name_ + "' repeats label '" + labels_[i] + "' (case-insensitive)");
    }
    max_span_ = std::max<std::size_t>(max_span_, text::split(trimmed, ',').size());
  }
}

std::optional<std::string> LabelSet::canonical(std::string_view candidate) const {
  auto it = by_lower_.find(text::to_lower(text::trim(candidate)));
  if (it == by_lower_.end()) return std::nullopt;
  return labels_[it->second];
}

LabelSet LabelSet::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("label set must be a JSON object");
  try {
    const std::string kind = j.at("prompt_kind").get<std::string>();
    PromptKind k;
    if (kind == "careers") {
      k = PromptKind::kCareers;
    } else if (kind == "factors") {
      k = PromptKind::kFactors;
    } else {
      throw ConfigError("label set prompt_kind must be 'careers' or 'factors', got '" + kind + "'");
    }
    return LabelSet(j.at("name").get<std::string>(), j.at("labels").get<std::vector<std::string>>(), k);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("label set schema error: ") + e.what());
  }
}

LabelSet LabelSet::load(const std::string& path) {
  try {
    return from_json(io::read_json(path));
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json LabelSet::to_json() const {
  return json{{"name", name_}, {"prompt_kind", kind_ == PromptKind::kCareers ? "careers" : "factors"},
              {"labels", labels_}};
}

std::string render_careers_prompt(const LabelSet& set, std::string_view statement) {
  if (set.kind() != PromptKind::kCareers) {
    throw ParameterError("label set '" + set.name() + "' is not a careers set");
  }
  if (text::trim(statement).empty()) throw ParameterError("statement must be non-empty");
  return prompts::fill(prompts::kCareersTemplate, {{"labels_string", prompts::labels_string(set.labels())},
                                                   {"statement", std::string(statement)}});
}

std::string render_factors_prompt(const LabelSet& set, std::string_view comment) {
  if (set.kind() != PromptKind::kFactors) {
    throw ParameterError("label set '" + set.name() + "' is not a factors set");
  }
  if (text::trim(comment).empty()) throw ParameterError("comment must be non-empty");
  return prompts::fill(prompts::kFactorsTemplate, {{"labels_string", prompts::labels_string(set.labels())},
                                                   {"comment", std::string(comment)}});
}

std::string render_prompt(const LabelSet& set, std::string_view text) {
  return set.kind() == PromptKind::kCareers ? render_careers_prompt(set, text) : render_factors_prompt(set, text);
}

namespace {

bool is_sentinel(std::string_view s) {
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == ';' || s.back() == ':')) {
    s.remove_suffix(1);
  }
  s = text::trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = text::trim(s.substr(1, s.size() - 2));
  }
  return text::iequals(s, "N/A");
}

}  // namespace

ParsedLabels parse_label_response(std::string_view response, const LabelSet& set) {
  ParsedLabels out;
  std::string_view s = text::trim(response);
  std::string_view rest;
  if (text::strip_prefix_ci(s, prompts::kListMarker, &rest)) s = text::trim(rest);
  if (s.empty() || is_sentinel(s)) return out;
  if (s.back() == '.') s.remove_suffix(1);

  std::vector<std::string> pieces;
  for (const auto& p : text::split(s, ',')) {
    std::string_view t = text::trim(p);
    if (!t.empty()) pieces.emplace_back(t);
  }

  std::size_t i = 0;
  while (i < pieces.size()) {
    bool matched = false;
    for (std::size_t span = std::min(set.max_comma_span(), pieces.size() - i); span >= 1; --span) {
      std::vector<std::string> window(pieces.begin() + i, pieces.begin() + i + span);
      if (auto canon = set.canonical(text::join(window, ", "))) {
        if (std::find(out.labels.begin(), out.labels.end(), *canon) == out.labels.end()) {
          out.labels.push_back(*canon);
        }
        i += span;
        matched = true;
        break;
      }
    }
    if (!matched) out.unmatched.push_back(pieces[i++]);
  }
  return out;
}

std::vector<LabelApplication> apply_label_set(const std::vector<corpus::SentenceRecord>& sentences,
                                              const LabelSet& set, providers::Generator& gen,
                                              const ApplyOptions& opts) {
  std::vector<LabelApplication> out(sentences.size());
  std::mutex callback_mu;
  parallel_for(sentences.size(), opts.max_in_flight, [&](std::size_t i) {
    const auto& s = sentences[i];
    if (opts.completed) {
      if (auto it = opts.completed->find(s.sent_id); it != opts.completed->end()) {
        out[i] = it->second;
        return;
      }
    }
    const std::string raw = gen.generate({render_prompt(set, s.text)}).text;
    ParsedLabels parsed = parse_label_response(raw, set);
    out[i] = LabelApplication{s.sent_id, set.name(), std::move(parsed.labels), raw, std::move(parsed.unmatched)};
    if (opts.on_complete) {
      std::lock_guard lock(callback_mu);
      opts.on_complete(out[i]);
    }
  });
  return out;
}

std::vector<std::pair<std::string, std::size_t>> label_histogram(const std::vector<LabelApplication>& apps,
                                                                 const LabelSet& set) {
  std::map<std::string, std::size_t> counts;
  for (const auto& a : apps) {
    for (const auto& l : a.labels) ++counts[l];
  }
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& l : set.labels()) out.emplace_back(l, counts[l]);
  return out;
}

json to_json(const LabelApplication& a) {
  return json{{"sent_id", a.sent_id},
              {"label_set", a.label_set},
              {"labels", a.labels},
              {"raw_response", a.raw_response},
              {"unmatched", a.unmatched}};
}

LabelApplication application_from_json(const json& j) {
  return LabelApplication{j.at("sent_id").get<std::string>(), j.at("label_set").get<std::string>(),
                          j.at("labels").get<std::vector<std::string>>(), j.at("raw_response").get<std::string>(),
                          j.value("unmatched", std::vector<std::string>{})};
}

}  // namespace thematic::deductive
