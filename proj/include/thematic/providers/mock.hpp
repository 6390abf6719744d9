#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "thematic/providers/backend.hpp"
#include "thematic/providers/types.hpp"

namespace thematic::providers {

/// Deterministic offline embedding. The rule:
///   state = fnv1a64(text) XOR (seed * 0x9e3779b97f4a7c15)
///   x_i   = 2 * ((splitmix64(state) >> 11) * 2^-53) - 1,  i = 0..dim-1
///   result = x / |x|
/// Throws DomainError when dim < 2.
EmbeddingVector mock_embedding(std::string_view text, std::size_t dim, std::uint64_t seed);

/// Planted-topic variant: text tagged `[topic:K]` maps to
/// normalize(e_{K mod dim} + noise * mock_embedding(text)); untagged text
/// falls back to mock_embedding.
EmbeddingVector mock_embedding_planted(std::string_view text, std::size_t dim, std::uint64_t seed,
                                       double noise);

/// The K of the first `[topic:K]` tag in `text`.
std::optional<std::size_t> planted_topic(std::string_view text);

/// Digest used as the fixture key for a prompt.
std::string prompt_digest(std::string_view prompt);

class MockEmbeddingBackend : public EmbeddingBackend {
 public:
  MockEmbeddingBackend(MockOptions opts, std::uint64_t seed);
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) override;
  std::string identity() const override;

 private:
  MockOptions opts_;
  std::uint64_t seed_;
};

/// Scripted generative backend. Looks prompts up by digest in a fixture map;
/// on a miss it either throws NoFixtureError (strict) or synthesizes a
/// deterministic reply appropriate to the prompt kind.
class MockGenerativeBackend : public GenerativeBackend {
 public:
  MockGenerativeBackend(std::map<std::string, std::string> fixtures, bool strict, std::uint64_t seed);
  std::string complete(const std::string& prompt, std::string& raw) override;
  std::string identity() const override;

  /// Fixture file: JSON object mapping prompt digest to response text.
  static std::map<std::string, std::string> load_fixtures(const std::string& path);

 private:
  std::string synthesize(const std::string& prompt) const;

  std::map<std::string, std::string> fixtures_;
  bool strict_;
  std::uint64_t seed_;
};

}  // namespace thematic::providers
