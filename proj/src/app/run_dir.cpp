#include "thematic/app/run_dir.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <ctime>
#include <filesystem>

#include "thematic/error.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/text.hpp"

namespace thematic::app {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool process_alive(long pid) {
  if (pid <= 0) return false;
  return ::kill(static_cast<pid_t>(pid), 0) == 0 || errno == EPERM;
}

}  // namespace

RunDir::RunDir(std::string path, bool create) : path_(std::move(path)) {
  std::error_code ec;
  if (create) {
    fs::create_directories(path_, ec);
    if (ec) throw ConfigError("cannot create run directory " + path_ + ": " + ec.message());
  } else if (!fs::is_directory(path_, ec)) {
    throw StageError("run directory " + path_ + " does not exist; run `ingest` first");
  }
  acquire_lock();

  const std::string mpath = file(kManifestFile);
  if (fs::exists(mpath)) {
    try {
      manifest_ = io::read_json(mpath);
    } catch (const ValidationError& e) {
      throw StageError(std::string("corrupt run manifest: ") + e.what());
    }
  } else if (create) {
    const std::string created = utc_now();
    manifest_ = json{{"run_id", sha256_hex(fs::absolute(path_).string() + "|" + created).substr(0, 16)},
                     {"created_at", created},
                     {"stages", json::object()},
                     {"events", json::array()}};
    save();
  } else {
    throw StageError("run directory " + path_ + " has no manifest; run `ingest` first");
  }
}

RunDir::~RunDir() {
  if (locked_) {
    std::error_code ec;
    fs::remove(file(kLockFile), ec);
  }
}

void RunDir::acquire_lock() {
  const std::string lock = file(kLockFile);
  for (int attempt = 0; attempt < 2; ++attempt) {
    int fd = ::open(lock.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      std::string pid = std::to_string(::getpid()) + "\n";
      if (::write(fd, pid.data(), pid.size()) < 0) {
        // The lock is held either way; the pid is advisory.
      }
      ::close(fd);
      locked_ = true;
      return;
    }
    long holder = 0;
    try {
      holder = std::stol(text::read_file(lock));
    } catch (...) {
      holder = 0;
    }
    if (process_alive(holder)) {
      throw StageError("run directory " + path_ + " is locked by process " + std::to_string(holder));
    }
    // Stale lock from a killed process.
    std::error_code ec;
    fs::remove(lock, ec);
  }
  throw StageError("cannot lock run directory " + path_);
}

std::string RunDir::file(const std::string& name) const { return (fs::path(path_) / name).string(); }

bool RunDir::has_artifact(const std::string& name) const { return fs::exists(file(name)); }

bool RunDir::stage_complete(const std::string& stage) {
  const json& stages = manifest_.at("stages");
  if (!stages.contains(stage) || !stages.at(stage).value("complete", false)) return false;
  for (const auto& [name, digest] : stages.at(stage).at("artifacts").items()) {
    if (!has_artifact(name)) return false;
    if (sha256_hex(text::read_file(file(name))) != digest.get<std::string>()) {
      throw StageError("artifact changed: " + name + " no longer matches the digest recorded by stage " + stage);
    }
  }
  return true;
}

void RunDir::require(const std::string& stage, const std::string& producer) {
  if (!stage_complete(stage)) {
    throw StageError("stage " + stage + " has not completed; run `" + producer + "` first");
  }
}

std::string RunDir::read_artifact(const std::string& name) {
  if (!has_artifact(name)) throw StageError("missing artifact " + name);
  return text::read_file(file(name));
}

void RunDir::write_artifact(const std::string& name, const std::string& content) {
  io::atomic_write(file(name), content);
}

void RunDir::mark_complete(const std::string& stage, const std::vector<std::string>& artifacts) {
  json digests = json::object();
  for (const auto& a : artifacts) digests[a] = sha256_hex(read_artifact(a));
  manifest_["stages"][stage] = json{{"complete", true}, {"artifacts", digests}};
  manifest_["events"].push_back(json{{"event", "stage_complete"}, {"stage", stage}, {"at", utc_now()}});
  save();
}

void RunDir::invalidate(const std::string& stage) {
  json& stages = manifest_["stages"];
  if (!stages.contains(stage)) return;
  stages.erase(stage);
  manifest_["events"].push_back(json{{"event", "stage_invalidated"}, {"stage", stage}, {"at", utc_now()}});
  save();
}

std::vector<std::string> RunDir::verify() const {
  std::vector<std::string> problems;
  for (const auto& [stage, entry] : manifest_.at("stages").items()) {
    for (const auto& [name, digest] : entry.at("artifacts").items()) {
      if (!has_artifact(name)) {
        problems.push_back(stage + ": missing " + name);
      } else if (sha256_hex(text::read_file(file(name))) != digest.get<std::string>()) {
        problems.push_back(stage + ": artifact changed " + name);
      }
    }
  }
  return problems;
}

void RunDir::set_field(const std::string& key, const json& value) {
  if (manifest_.contains(key) && manifest_.at(key) == value) return;
  manifest_[key] = value;
  manifest_["events"].push_back(json{{"event", "set"}, {"field", key}, {"at", utc_now()}});
  save();
}

void RunDir::append_event(const std::string& what, json detail) {
  detail["event"] = what;
  detail["at"] = utc_now();
  manifest_["events"].push_back(std::move(detail));
  save();
}

void RunDir::save() { io::atomic_write(file(kManifestFile), io::dump_pretty(manifest_)); }

}  // namespace thematic::app
