#include "thematic/error.hpp"
#include "thematic/providers/provider.hpp"
#include "thematic/util/digest.hpp"

namespace thematic::providers {

Generator::Generator(std::shared_ptr<GenerativeBackend> backend, ProviderConfig cfg, CallLog* log)
    : backend_(std::move(backend)), cfg_(std::move(cfg)), log_(log) {
  cfg_.validate();
  in_flight_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(cfg_.max_in_flight));
}

GenResponse Generator::generate(const GenRequest& req) {
  if (req.prompt.empty()) throw ParameterError("generate: prompt must be non-empty");

  GenResponse resp;
  int last_status = 0;
  std::string error;
  bool ok = false;

  in_flight_->acquire();
  for (int attempt = 1;; ++attempt) {
    resp.attempts = attempt;
    try {
      resp.text = backend_->complete(req.prompt, resp.raw);
      ok = true;
      break;
    } catch (const TransportError& e) {
      last_status = e.status();
      error = e.what();
      if (attempt > cfg_.max_retries) break;
      backoff_sleep(cfg_, attempt);
    } catch (...) {
      in_flight_->release();
      if (log_) log_->append(CallRecord{"generate", sha256_hex(req.prompt), req.prompt, "", attempt});
      throw;
    }
  }
  in_flight_->release();

  if (log_) log_->append(CallRecord{"generate", sha256_hex(req.prompt), req.prompt, resp.text, resp.attempts});
  if (!ok) {
    throw ProviderError("generation failed after " + std::to_string(resp.attempts) +
                            " attempts (last status " + std::to_string(last_status) + "): " + error,
                        last_status, resp.attempts);
  }
  if (resp.text.empty()) {
    throw EmptyResponseError("provider returned an empty response", 0, resp.attempts);
  }
  return resp;
}

}  // namespace thematic::providers
