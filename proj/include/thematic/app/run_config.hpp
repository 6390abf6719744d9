#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "thematic/audit/audit.hpp"
#include "thematic/cluster/cluster.hpp"
#include "thematic/inductive/inductive.hpp"
#include "thematic/providers/types.hpp"

namespace thematic::app {

/// Everything a command needs besides its own flags. Loaded from the
/// `--config` JSON file, then overridden by command line flags.
struct RunConfig {
  providers::ProviderConfig provider;
  std::uint64_t seed = 0;
  cluster::ClusterParams round1;
  cluster::ClusterParams round2;
  std::size_t max_cluster_sentences = inductive::kDefaultMaxClusterSentences;
  int flag_threshold = audit::kDefaultFlagThreshold;

  /// Relative fixture paths are resolved against `base_dir`.
  static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;
  /// SHA-256 of the compact JSON form.
  std::string digest() const;
};

}  // namespace thematic::app
