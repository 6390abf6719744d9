#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace thematic::io {

/// Compact single-line dump; invalid UTF-8 is replaced rather than thrown on.
std::string dump(const nlohmann::json& j);
/// Indented dump with a trailing newline, for human-facing artifacts.
std::string dump_pretty(const nlohmann::json& j);

/// Writes to `path.tmp` then renames over `path`.
void atomic_write(const std::string& path, const std::string& content);

std::string jsonl(const std::vector<nlohmann::json>& rows);
std::vector<nlohmann::json> read_jsonl(const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace thematic::io
