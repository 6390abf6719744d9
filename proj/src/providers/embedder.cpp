#include <algorithm>
#include <chrono>
#include <thread>

#include "thematic/error.hpp"
#include "thematic/providers/provider.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/parallel.hpp"

namespace thematic::providers {

void backoff_sleep(const ProviderConfig& cfg, int retry) {
  if (cfg.backoff_initial_ms <= 0) return;
  long long ms = cfg.backoff_initial_ms;
  for (int i = 1; i < retry && ms < cfg.backoff_max_ms; ++i) ms *= 2;
  ms = std::min<long long>(ms, cfg.backoff_max_ms);
  std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

Embedder::Embedder(std::shared_ptr<EmbeddingBackend> backend, ProviderConfig cfg, CallLog* log)
    : backend_(std::move(backend)), cfg_(std::move(cfg)), log_(log) {
  cfg_.validate();
}

std::optional<std::size_t> Embedder::run_dim() const {
  std::lock_guard lock(dim_mu_);
  return run_dim_;
}

std::vector<std::vector<double>> Embedder::request_with_retries(std::span<const std::string> chunk,
                                                                int* attempts, int* last_status) {
  for (int attempt = 1;; ++attempt) {
    *attempts = attempt;
    try {
      return backend_->embed(chunk);
    } catch (const TransportError& e) {
      *last_status = e.status();
      if (attempt > cfg_.max_retries) throw;
      backoff_sleep(cfg_, attempt);
    }
  }
}

std::vector<EmbeddingVector> Embedder::embed_batch(std::span<const std::string> texts) {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) throw ParameterError("cannot embed empty text at index " + std::to_string(i));
  }
  std::vector<EmbeddingVector> out(texts.size());
  if (texts.empty()) return out;

  const std::size_t chunk = cfg_.batch_size;
  const std::size_t n_chunks = (texts.size() + chunk - 1) / chunk;
  std::vector<char> failed(n_chunks, 0);
  std::vector<int> statuses(n_chunks, 0);

  parallel_for(n_chunks, cfg_.max_in_flight, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(texts.size(), begin + chunk);
    auto slice = texts.subspan(begin, end - begin);
    int attempts = 0;
    std::vector<std::vector<double>> vecs;
    try {
      vecs = request_with_retries(slice, &attempts, &statuses[c]);
    } catch (const TransportError&) {
      failed[c] = 1;
    }
    if (log_) {
      nlohmann::json prompt = nlohmann::json::array();
      for (const auto& t : slice) prompt.push_back(t);
      std::string p = io::dump(prompt);
      std::string response = failed[c] ? "" : std::to_string(vecs.size()) + " vectors";
      log_->append(CallRecord{"embed", sha256_hex(p), p, response, attempts});
    }
    if (failed[c]) return;
    if (vecs.size() != slice.size()) {
      throw ProviderError("embedding provider returned " + std::to_string(vecs.size()) +
                          " vectors for " + std::to_string(slice.size()) + " texts");
    }
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      {
        std::lock_guard lock(dim_mu_);
        if (!run_dim_) run_dim_ = vecs[i].size();
        if (*run_dim_ != vecs[i].size()) {
          throw DimensionMismatchError("embedding dimension changed within run: expected " +
                                       std::to_string(*run_dim_) + ", got " +
                                       std::to_string(vecs[i].size()));
        }
      }
      out[begin + i] = EmbeddingVector(std::move(vecs[i]));
    }
  });

  std::vector<std::size_t> failing;
  int last_status = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    if (!failed[c]) continue;
    last_status = statuses[c];
    for (std::size_t i = c * chunk; i < std::min(texts.size(), (c + 1) * chunk); ++i) failing.push_back(i);
  }
  if (!failing.empty()) {
    throw BatchError("embedding failed for " + std::to_string(failing.size()) + " texts after " +
                         std::to_string(cfg_.max_retries) + " retries",
                     std::move(failing), last_status);
  }
  return out;
}

}  // namespace thematic::providers
