#include <cmath>

#include "thematic/error.hpp"
#include "thematic/providers/types.hpp"
#include "thematic/util/text.hpp"

namespace thematic::providers {

using nlohmann::json;

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("embedding vector must have positive dimension");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("embedding entry " + std::to_string(i) + " is not finite",
                        static_cast<std::ptrdiff_t>(i));
    }
  }
}

double EmbeddingVector::norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void ProviderConfig::validate() const {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (kind == ProviderKind::kLive && base_url.empty()) throw ConfigError("live provider needs base_url");
  if (kind == ProviderKind::kMock && mock.dim < 2) throw ConfigError("mock dim must be >= 2");
}

std::string ProviderConfig::identity() const {
  if (kind == ProviderKind::kMock) return "mock:" + model_name;
  return base_url + "#" + model_name;
}

std::string ProviderConfig::embedding_identity() const {
  if (kind == ProviderKind::kMock) return "mock:" + embedding_model_name();
  return base_url + "#" + embedding_model_name();
}

ProviderConfig ProviderConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("provider config must be a JSON object");
  ProviderConfig c;
  try {
    if (j.contains("kind")) {
      auto k = j.at("kind").get<std::string>();
      if (k == "live") {
        c.kind = ProviderKind::kLive;
      } else if (k == "mock") {
        c.kind = ProviderKind::kMock;
      } else {
        throw ConfigError("provider kind must be 'live' or 'mock', got '" + k + "'");
      }
    }
    c.base_url = j.value("base_url", c.base_url);
    c.model_name = j.value("model_name", c.model_name);
    c.embedding_model = j.value("embedding_model", c.embedding_model);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    c.backoff_initial_ms = j.value("backoff_initial_ms", c.backoff_initial_ms);
    c.backoff_max_ms = j.value("backoff_max_ms", c.backoff_max_ms);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.batch_size = j.value("batch_size", c.batch_size);
    if (j.contains("mock")) {
      const json& m = j.at("mock");
      c.mock.dim = m.value("dim", c.mock.dim);
      c.mock.planted = m.value("planted", c.mock.planted);
      c.mock.planted_noise = m.value("planted_noise", c.mock.planted_noise);
      c.mock.strict = m.value("strict", c.mock.strict);
      c.mock.fixtures_path = m.value("fixtures", c.mock.fixtures_path);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid provider config: ") + e.what());
  }
  c.validate();
  return c;
}

ProviderConfig ProviderConfig::load(const std::string& path) {
  try {
    return from_json(json::parse(text::read_file(path)));
  } catch (const json::exception& e) {
    throw ConfigError("provider config " + path + " is not valid JSON: " + e.what());
  }
}

json ProviderConfig::to_json() const {
  json j{{"kind", kind == ProviderKind::kLive ? "live" : "mock"},
         {"base_url", base_url},
         {"model_name", model_name},
         {"embedding_model", embedding_model},
         {"temperature", temperature},
         {"max_retries", max_retries},
         {"max_in_flight", max_in_flight},
         {"api_key_env", api_key_env},
         {"seed", seed ? json(*seed) : json(nullptr)},
         {"backoff_initial_ms", backoff_initial_ms},
         {"backoff_max_ms", backoff_max_ms},
         {"timeout_seconds", timeout_seconds},
         {"batch_size", batch_size}};
  if (kind == ProviderKind::kMock) {
    j["mock"] = json{{"dim", mock.dim},
                     {"planted", mock.planted},
                     {"planted_noise", mock.planted_noise},
                     {"strict", mock.strict},
                     {"fixtures", mock.fixtures_path}};
  }
  return j;
}

}  // namespace thematic::providers
