#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace thematic::providers {

/// Fixed-length vector of finite reals.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Throws DomainError if `values` is empty or holds a non-finite entry.
  explicit EmbeddingVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double norm() const noexcept;

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

enum class ProviderKind { kLive, kMock };

struct MockOptions {
  std::size_t dim = 64;
  /// Texts carrying a `[topic:K]` tag embed near the K-th basis direction.
  bool planted = true;
  double planted_noise = 0.25;
  /// Fail on prompts that have no fixture instead of synthesizing a reply.
  bool strict = false;
  std::string fixtures_path;
};

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kMock;
  std::string base_url;
  std::string model_name = "mock";
  /// Model for /embeddings; model_name when empty.
  std::string embedding_model;
  double temperature = 0.0;
  int max_retries = 3;
  std::size_t max_in_flight = 4;
  std::string api_key_env;
  std::optional<std::uint64_t> seed;

  int backoff_initial_ms = 250;
  int backoff_max_ms = 8000;
  int timeout_seconds = 60;
  std::size_t batch_size = 64;
  MockOptions mock;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
  /// "mock:<model>" or "<base_url>#<model>"; recorded in manifests.
  std::string identity() const;
  std::string embedding_identity() const;
  const std::string& embedding_model_name() const { return embedding_model.empty() ? model_name : embedding_model; }

  static ProviderConfig from_json(const nlohmann::json& j);
  static ProviderConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

struct GenRequest {
  std::string prompt;
};

struct GenResponse {
  /// Message content exactly as returned, untrimmed.
  std::string text;
  /// Full provider payload.
  std::string raw;
  int attempts = 1;
};

}  // namespace thematic::providers
