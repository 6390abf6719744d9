#include "thematic/app/run_config.hpp"

#include <filesystem>

#include "thematic/error.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/text.hpp"

namespace thematic::app {

using nlohmann::json;

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("provider")) c.provider = providers::ProviderConfig::from_json(j.at("provider"));
    c.seed = j.value("seed", c.seed);
    if (j.contains("round1")) c.round1 = cluster::params_from_json(j.at("round1"));
    if (j.contains("round2")) c.round2 = cluster::params_from_json(j.at("round2"));
    c.max_cluster_sentences = j.value("max_cluster_sentences", c.max_cluster_sentences);
    c.flag_threshold = j.value("flag_threshold", c.flag_threshold);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  if (c.max_cluster_sentences < 1) throw ConfigError("max_cluster_sentences must be >= 1");
  audit::check_threshold(c.flag_threshold);
  auto& fixtures = c.provider.mock.fixtures_path;
  if (!fixtures.empty() && !base_dir.empty() && std::filesystem::path(fixtures).is_relative()) {
    fixtures = (std::filesystem::path(base_dir) / fixtures).lexically_normal().string();
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j, std::filesystem::path(path).parent_path().string());
}

json RunConfig::to_json() const {
  return json{{"provider", provider.to_json()},
              {"seed", seed},
              {"round1", cluster::to_json(round1)},
              {"round2", cluster::to_json(round2)},
              {"max_cluster_sentences", max_cluster_sentences},
              {"flag_threshold", flag_threshold}};
}

std::string RunConfig::digest() const { return sha256_hex(io::dump(to_json())); }

}  // namespace thematic::app
