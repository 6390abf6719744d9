#pragma once

#include <string>

#include "thematic/providers/backend.hpp"
#include "thematic/providers/types.hpp"

namespace thematic::providers {

/// POST {base_url}/chat/completions with an OpenAI-style message list.
class HttpChatBackend : public GenerativeBackend {
 public:
  explicit HttpChatBackend(ProviderConfig cfg);
  std::string complete(const std::string& prompt, std::string& raw) override;
  std::string identity() const override;

 private:
  ProviderConfig cfg_;
};

/// POST {base_url}/embeddings with {"model", "input": [...]}.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(ProviderConfig cfg);
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) override;
  std::string identity() const override;

 private:
  ProviderConfig cfg_;
};

}  // namespace thematic::providers
