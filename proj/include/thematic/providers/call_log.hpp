#pragma once

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace thematic::providers {

struct CallRecord {
  std::string kind;  // "embed" | "generate"
  std::string prompt_digest;
  std::string prompt;
  std::string response;
  int attempts = 1;

  nlohmann::json to_json() const;
};

/// Thread-safe record of every provider call. When opened on a path, each
/// record is also appended to that file as one JSON line.
class CallLog {
 public:
  CallLog() = default;
  explicit CallLog(const std::string& path);

  void append(CallRecord record);
  std::vector<CallRecord> records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<CallRecord> records_;
  std::ofstream sink_;
};

}  // namespace thematic::providers
