#include "thematic/util/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "thematic/error.hpp"
#include "thematic/util/text.hpp"

namespace thematic::io {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

std::string dump_pretty(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += dump(r);
    out.push_back('\n');
  }
  return out;
}

std::vector<json> read_jsonl(const std::string& path) {
  std::vector<json> rows;
  std::size_t line_no = 0;
  for (const auto& line : text::split(text::read_file(path), '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

json read_json(const std::string& path) {
  try {
    return json::parse(text::read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace thematic::io
