#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "thematic/store.hpp"

namespace thematic::app {

inline constexpr const char* kManifestFile = "run.json";
inline constexpr const char* kLockFile = ".lock";

/// One run per directory, flat layout with fixed file names. Holds an
/// exclusive lock for its lifetime and keeps the manifest (run.json) in step
/// with every artifact it writes.
class RunDir : public StageStore {
 public:
  /// Opens `path`. With `create`, a missing directory and manifest are made;
  /// otherwise a missing manifest is a StageError. Throws StageError if
  /// another live process holds the lock.
  RunDir(std::string path, bool create);
  ~RunDir() override;
  RunDir(const RunDir&) = delete;
  RunDir& operator=(const RunDir&) = delete;

  const std::string& path() const noexcept { return path_; }
  std::string file(const std::string& name) const;
  bool has_artifact(const std::string& name) const;

  bool stage_complete(const std::string& stage) override;
  std::string read_artifact(const std::string& name) override;
  void write_artifact(const std::string& name, const std::string& content) override;
  void mark_complete(const std::string& stage, const std::vector<std::string>& artifacts) override;
  void invalidate(const std::string& stage) override;

  /// Throws StageError naming `stage` (and the command that produces it)
  /// unless it is complete with intact artifacts.
  void require(const std::string& stage, const std::string& producer);

  /// Re-hashes every recorded artifact; returns descriptions of mismatches.
  std::vector<std::string> verify() const;

  const nlohmann::json& manifest() const noexcept { return manifest_; }
  /// Sets a top-level manifest field and records an event.
  void set_field(const std::string& key, const nlohmann::json& value);
  void append_event(const std::string& what, nlohmann::json detail = nlohmann::json::object());

 private:
  void save();
  void acquire_lock();

  std::string path_;
  nlohmann::json manifest_;
  bool locked_ = false;
};

}  // namespace thematic::app
