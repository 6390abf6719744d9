#include "fixtures.hpp"

#include <filesystem>
#include <random>

#include <json.hpp>

#include "thematic/error.hpp"
#include "thematic/providers/mock.hpp"
#include "thematic/util/text.hpp"

namespace testing {

namespace fs = std::filesystem;
using nlohmann::json;

std::string data_path(const std::string& rel) { return std::string(THEMATIC_DATA_DIR) + "/" + rel; }
std::string test_data_path(const std::string& rel) { return std::string(THEMATIC_TEST_DATA_DIR) + "/" + rel; }
std::string golden(const std::string& name) {
  return thematic::text::read_file(std::string(THEMATIC_GOLDEN_DIR) + "/" + name);
}

thematic::providers::ProviderConfig mock_config(std::size_t max_in_flight) {
  thematic::providers::ProviderConfig c;
  c.max_in_flight = max_in_flight;
  c.backoff_initial_ms = 0;
  c.backoff_max_ms = 0;
  return c;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = (fs::temp_directory_path() /
           ("thematic_test_" + std::to_string(rd()) + "_" + std::to_string(counter++)))
              .string();
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<AuditRow> load_audit_rows(const std::string& name) {
  std::vector<AuditRow> rows;
  for (const auto& line : thematic::text::split(thematic::text::read_file(test_data_path(name)), '\n')) {
    if (thematic::text::trim(line).empty()) continue;
    json j = json::parse(line);
    rows.push_back(AuditRow{j.at("doc_id"), j.at("text"), j.at("labels"), j.at("scores"), j.at("verdicts")});
  }
  return rows;
}

std::map<std::string, std::string> audit_fixture_map(const std::vector<AuditRow>& rows,
                                                     const thematic::deductive::LabelSet& set) {
  using thematic::deductive::PromptKind;
  std::map<std::string, std::string> m;
  for (const auto& r : rows) {
    std::string reply = r.labels.empty() ? "N/A" : thematic::text::join(r.labels, ", ");
    if (set.kind() == PromptKind::kFactors && !r.labels.empty()) reply = "List: " + reply;
    m[thematic::providers::prompt_digest(thematic::deductive::render_prompt(set, r.text))] = reply;
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      m[thematic::providers::prompt_digest(thematic::audit::render_accuracy_prompt(r.labels[i], r.text))] =
          std::to_string(r.scores[i]);
    }
  }
  return m;
}

ScriptedGenerative::ScriptedGenerative(std::function<std::string(const std::string&)> reply, int fail_first,
                                       int status)
    : reply_(std::move(reply)), fail_left_(fail_first), status_(status) {}

std::string ScriptedGenerative::complete(const std::string& prompt, std::string& raw) {
  ++calls_;
  if (fail_left_.fetch_sub(1) > 0) throw thematic::TransportError("scripted failure", status_);
  raw = "{}";
  return reply_(prompt);
}

}  // namespace testing
