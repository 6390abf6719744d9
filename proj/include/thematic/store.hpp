#pragma once

#include <string>
#include <vector>

namespace thematic {

/// Persistence seam between pipeline stages and a run directory.
class StageStore {
 public:
  virtual ~StageStore() = default;

  /// True when `stage` was recorded complete and every artifact it listed is
  /// present with its recorded digest. Throws StageError ("artifact changed")
  /// if a listed artifact exists but its content no longer matches.
  virtual bool stage_complete(const std::string& stage) = 0;

  virtual std::string read_artifact(const std::string& name) = 0;
  /// Atomic write; the digest is recorded when the owning stage completes.
  virtual void write_artifact(const std::string& name, const std::string& content) = 0;
  virtual void mark_complete(const std::string& stage, const std::vector<std::string>& artifacts) = 0;
  /// Forget completion of `stage` (its inputs were recomputed).
  virtual void invalidate(const std::string& stage) = 0;
};

}  // namespace thematic
