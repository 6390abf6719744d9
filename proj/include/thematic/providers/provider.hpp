#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "thematic/providers/backend.hpp"
#include "thematic/providers/call_log.hpp"
#include "thematic/providers/types.hpp"

namespace thematic::providers {

/// Retrying, rate-bounded embedding client. Output order always matches
/// input order, whatever the chunking or concurrency.
class Embedder {
 public:
  Embedder(std::shared_ptr<EmbeddingBackend> backend, ProviderConfig cfg, CallLog* log = nullptr);

  /// Splits `texts` into chunks of cfg.batch_size and sends up to
  /// cfg.max_in_flight chunks at once. Throws BatchError with the indices of
  /// every chunk that still failed after retries, DimensionMismatchError if
  /// the dimension differs from earlier calls on this Embedder.
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts);

  std::optional<std::size_t> run_dim() const;
  const ProviderConfig& config() const noexcept { return cfg_; }
  std::string identity() const { return backend_->identity(); }

 private:
  std::vector<std::vector<double>> request_with_retries(std::span<const std::string> chunk,
                                                        int* attempts, int* last_status);

  std::shared_ptr<EmbeddingBackend> backend_;
  ProviderConfig cfg_;
  CallLog* log_;
  mutable std::mutex dim_mu_;
  std::optional<std::size_t> run_dim_;
};

/// Retrying, rate-bounded generative client. Every call lands in the call log.
class Generator {
 public:
  Generator(std::shared_ptr<GenerativeBackend> backend, ProviderConfig cfg, CallLog* log = nullptr);

  /// Throws ProviderError after cfg.max_retries retries, EmptyResponseError
  /// when the provider answers with empty content.
  GenResponse generate(const GenRequest& req);

  const ProviderConfig& config() const noexcept { return cfg_; }
  std::string identity() const { return backend_->identity(); }

 private:
  std::shared_ptr<GenerativeBackend> backend_;
  ProviderConfig cfg_;
  CallLog* log_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

/// Sleeps for the backoff that precedes retry number `retry` (1-based).
void backoff_sleep(const ProviderConfig& cfg, int retry);

}  // namespace thematic::providers
