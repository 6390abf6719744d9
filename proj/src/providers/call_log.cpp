#include "thematic/providers/call_log.hpp"

#include "thematic/error.hpp"
#include "thematic/util/io.hpp"

namespace thematic::providers {

nlohmann::json CallRecord::to_json() const {
  return nlohmann::json{{"kind", kind},
                        {"prompt_digest", prompt_digest},
                        {"prompt", prompt},
                        {"response", response},
                        {"attempts", attempts}};
}

CallLog::CallLog(const std::string& path) : sink_(path, std::ios::app | std::ios::binary) {
  if (!sink_) throw ConfigError("cannot open call log " + path);
}

void CallLog::append(CallRecord record) {
  std::lock_guard lock(mu_);
  if (sink_.is_open()) {
    sink_ << io::dump(record.to_json()) << '\n';
    sink_.flush();
  }
  records_.push_back(std::move(record));
}

std::vector<CallRecord> CallLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t CallLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

}  // namespace thematic::providers
