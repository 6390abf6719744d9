#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thematic/providers/types.hpp"

namespace thematic::providers {

/// One embedding request. Throws TransportError on retryable failure.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<std::vector<double>> embed(std::span<const std::string> texts) = 0;
  virtual std::string identity() const = 0;
};

/// One chat completion request. Returns message content; `raw` receives the
/// provider payload. Throws TransportError on retryable failure.
class GenerativeBackend {
 public:
  virtual ~GenerativeBackend() = default;
  virtual std::string complete(const std::string& prompt, std::string& raw) = 0;
  virtual std::string identity() const = 0;
};

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const ProviderConfig& cfg);
std::shared_ptr<GenerativeBackend> make_generative_backend(const ProviderConfig& cfg);

}  // namespace thematic::providers
