#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thematic {

/// Process exit codes used by the command line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfiguration = 2,
  kProvider = 3,
  kStageGating = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kFailure; }
};

/// Bad configuration file, malformed pattern, invalid label set, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfiguration; }
};

/// Out-of-range parameter passed to an operation (k > n, negative threshold).
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Input outside the mathematical domain of an operation (zero vectors).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// Input data failing validation (duplicate ids, unknown verdicts, dangling reviews).
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfiguration; }
};

/// A single provider request failed at the transport level. Retryable.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status = 0) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kProvider; }

 private:
  int status_;
};

/// Provider gave up after exhausting retries, or returned an unusable answer.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, int last_status = 0, int attempts = 0)
      : Error(what), last_status_(last_status), attempts_(attempts) {}
  int last_status() const noexcept { return last_status_; }
  int attempts() const noexcept { return attempts_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kProvider; }

 private:
  int last_status_;
  int attempts_;
};

class EmptyResponseError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// Strict mock mode was asked for a prompt that has no scripted response.
class NoFixtureError : public ProviderError {
 public:
  NoFixtureError(const std::string& digest)
      : ProviderError("no fixture for prompt digest " + digest), digest_(digest) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

/// Embedding batch failure; carries the input indices that could not be embedded.
class BatchError : public ProviderError {
 public:
  BatchError(const std::string& what, std::vector<std::size_t> failing, int last_status)
      : ProviderError(what, last_status), failing_(std::move(failing)) {}
  const std::vector<std::size_t>& failing_indices() const noexcept { return failing_; }

 private:
  std::vector<std::size_t> failing_;
};

/// Embedding dimension changed within a run. Not recoverable.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kProvider; }
};

/// Upstream stage incomplete, artifact tampered with, or run directory locked.
class StageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kStageGating; }
};

}  // namespace thematic
