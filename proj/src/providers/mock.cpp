#include "thematic/providers/mock.hpp"

#include <cmath>
#include <map>

#include "thematic/error.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/text.hpp"

namespace thematic::providers {
namespace {

std::vector<double> hash_unit(std::string_view text, std::size_t dim, std::uint64_t seed) {
  std::uint64_t state = fnv1a64(text) ^ (seed * 0x9e3779b97f4a7c15ULL);
  std::vector<double> v(dim);
  double sq = 0.0;
  for (auto& x : v) {
    x = 2.0 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (norm == 0.0) {
    v.assign(dim, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= norm;
  return v;
}

// Most frequent planted topic among `items`; ties go to the smaller id.
std::optional<std::size_t> majority_topic(const std::vector<std::string>& items) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& item : items) {
    if (auto t = planted_topic(item)) ++counts[*t];
  }
  std::optional<std::size_t> best;
  std::size_t best_count = 0;
  for (const auto& [topic, count] : counts) {
    if (count > best_count) {
      best = topic;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

EmbeddingVector mock_embedding(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw DomainError("mock embedding dimension must be >= 2");
  return EmbeddingVector(hash_unit(text, dim, seed));
}

std::optional<std::size_t> planted_topic(std::string_view text) {
  static constexpr std::string_view kTag = "[topic:";
  std::size_t pos = 0;
  while ((pos = text.find(kTag, pos)) != std::string_view::npos) {
    std::size_t i = pos + kTag.size();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9' && digits < 9) {
      value = value * 10 + static_cast<std::size_t>(text[i] - '0');
      ++i;
      ++digits;
    }
    if (digits > 0 && i < text.size() && text[i] == ']') return value;
    pos += kTag.size();
  }
  return std::nullopt;
}

EmbeddingVector mock_embedding_planted(std::string_view text, std::size_t dim, std::uint64_t seed,
                                       double noise) {
  if (dim < 2) throw DomainError("mock embedding dimension must be >= 2");
  auto topic = planted_topic(text);
  if (!topic) return mock_embedding(text, dim, seed);
  std::vector<double> v = hash_unit(text, dim, seed);
  for (auto& x : v) x *= noise;
  v[*topic % dim] += 1.0;
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  for (auto& x : v) x /= norm;
  return EmbeddingVector(std::move(v));
}

std::string prompt_digest(std::string_view prompt) { return sha256_hex(prompt); }

MockEmbeddingBackend::MockEmbeddingBackend(MockOptions opts, std::uint64_t seed)
    : opts_(std::move(opts)), seed_(seed) {}

std::vector<std::vector<double>> MockEmbeddingBackend::embed(std::span<const std::string> texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    EmbeddingVector v = opts_.planted ? mock_embedding_planted(t, opts_.dim, seed_, opts_.planted_noise)
                                      : mock_embedding(t, opts_.dim, seed_);
    out.emplace_back(v.values().begin(), v.values().end());
  }
  return out;
}

std::string MockEmbeddingBackend::identity() const {
  return std::string("mock-embedding:") + (opts_.planted ? "planted" : "hash") + ":dim=" +
         std::to_string(opts_.dim);
}

MockGenerativeBackend::MockGenerativeBackend(std::map<std::string, std::string> fixtures, bool strict,
                                             std::uint64_t seed)
    : fixtures_(std::move(fixtures)), strict_(strict), seed_(seed) {}

std::map<std::string, std::string> MockGenerativeBackend::load_fixtures(const std::string& path) {
  nlohmann::json j;
  try {
    j = io::read_json(path);
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot load fixtures: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("fixture file " + path + " must be a JSON object");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) throw ConfigError("fixture " + key + " in " + path + " is not a string");
    out.emplace(key, value.get<std::string>());
  }
  return out;
}

std::string MockGenerativeBackend::complete(const std::string& prompt, std::string& raw) {
  const std::string digest = prompt_digest(prompt);
  std::string text;
  if (auto it = fixtures_.find(digest); it != fixtures_.end()) {
    text = it->second;
  } else if (strict_) {
    throw NoFixtureError(digest);
  } else {
    text = synthesize(prompt);
  }
  raw = io::dump(nlohmann::json{{"mock", true}, {"prompt_digest", digest}, {"content", text}});
  return text;
}

std::string MockGenerativeBackend::identity() const {
  return std::string("mock-generative:") + (strict_ ? "strict" : "synthetic");
}

namespace {

// Listed labels that occur verbatim (ignoring case) in the prompt's comment.
std::vector<std::string> literal_mentions(std::string_view prompt) {
  const std::size_t open = prompt.find('[');
  const std::size_t close = prompt.find("].", open);
  std::size_t body = prompt.rfind("STATEMENT: ");
  std::size_t skip = 11;
  if (body == std::string_view::npos) {
    body = prompt.rfind("COMMENT: ");
    skip = 9;
  }
  if (open == std::string_view::npos || close == std::string_view::npos || body == std::string_view::npos) return {};
  const std::string comment = text::to_lower(prompt.substr(body + skip));
  std::vector<std::string> out;
  for (const auto& label : text::split(prompt.substr(open + 1, close - open - 1), ',')) {
    std::string_view l = text::trim(label);
    if (l.size() >= 4 && comment.find(text::to_lower(l)) != std::string::npos) out.emplace_back(l);
  }
  return out;
}

}  // namespace

std::string MockGenerativeBackend::synthesize(const std::string& prompt) const {
  using prompts::PromptKind;
  const std::string tag = prompt_digest(prompt).substr(0, 8);
  switch (prompts::classify(prompt)) {
    case PromptKind::kSummary: {
      auto topic = majority_topic(prompts::bullet_items(prompt));
      if (topic) return "Commonality: Shared interest in [topic:" + std::to_string(*topic) + "] careers.";
      return "Commonality: Shared interest " + tag + ".";
    }
    case PromptKind::kLabel: {
      auto topic = majority_topic(prompts::bullet_items(prompt));
      if (topic) return "Label: Theme [topic:" + std::to_string(*topic) + "]";
      return "Label: Theme " + tag;
    }
    case PromptKind::kCareers:
    case PromptKind::kFactors: {
      auto found = literal_mentions(prompt);
      if (found.empty()) return "N/A";
      const std::string list = text::join(found, ", ");
      return prompts::classify(prompt) == PromptKind::kFactors ? "List: " + list : list;
    }
    case PromptKind::kAccuracy:
      return std::to_string(1 + (fnv1a64(prompt) ^ seed_) % 10);
    case PromptKind::kUnknown:
      break;
  }
  return "Mock response " + tag;
}

}  // namespace thematic::providers
