#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "thematic/audit/audit.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/providers/backend.hpp"
#include "thematic/providers/types.hpp"

namespace testing {

std::string data_path(const std::string& rel);
std::string test_data_path(const std::string& rel);
std::string golden(const std::string& name);

/// Mock provider settings with zero backoff.
thematic::providers::ProviderConfig mock_config(std::size_t max_in_flight = 4);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::string& path() const { return path_; }
  std::string operator/(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

/// One row of an audit fixture file: a statement, the labels applied to
/// it, the model's score for each label and the human verdict on each.
struct AuditRow {
  std::string doc_id;
  std::string text;
  std::vector<std::string> labels;
  std::vector<int> scores;
  std::vector<std::string> verdicts;
};
std::vector<AuditRow> load_audit_rows(const std::string& name);

/// Mock fixture map (prompt digest -> reply) that makes the labeling and
/// rating prompts for `rows` return exactly the recorded labels and scores.
/// Sentence ids are `<doc_id>#0`.
std::map<std::string, std::string> audit_fixture_map(const std::vector<AuditRow>& rows,
                                                     const thematic::deductive::LabelSet& set);

/// Generative backend replying through a user function; counts calls and
/// can be told to fail the first N calls with a retryable status.
class ScriptedGenerative : public thematic::providers::GenerativeBackend {
 public:
  explicit ScriptedGenerative(std::function<std::string(const std::string&)> reply, int fail_first = 0,
                              int status = 503);
  std::string complete(const std::string& prompt, std::string& raw) override;
  std::string identity() const override { return "scripted"; }
  int calls() const { return calls_.load(); }

 private:
  std::function<std::string(const std::string&)> reply_;
  std::atomic<int> fail_left_;
  int status_;
  std::atomic<int> calls_{0};
};

}  // namespace testing
