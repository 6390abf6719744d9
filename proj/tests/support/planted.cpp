#include "planted.hpp"

#include <filesystem>
#include <fstream>

namespace testing {

namespace {

const char* const kSubjects[] = {"building", "testing", "studying", "designing", "improving", "repairing", "planning"};
const char* const kObjects[] = {"pumps", "networks", "turbines", "circuits", "engines", "sensors", "bridges", "robots"};

}  // namespace

PlantedCorpus make_planted_corpus(std::size_t topics, std::size_t per_topic, std::size_t per_doc) {
  PlantedCorpus pc;
  const std::size_t total = topics * per_topic;
  std::string text;
  std::size_t doc = 0, in_doc = 0;
  auto flush = [&] {
    if (in_doc == 0) return;
    char id[16];
    std::snprintf(id, sizeof id, "doc%03zu", doc);
    pc.documents.emplace_back(id, text);
    text.clear();
    in_doc = 0;
    ++doc;
  };
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t topic = s % topics;
    const std::size_t serial = s / topics;
    if (!text.empty()) text += ' ';
    text += "Student " + std::to_string(s) + " enjoys " + kSubjects[serial % 7] + " " + kObjects[(s * 3) % 8] +
            " in area " + std::to_string(topic) + " [topic:" + std::to_string(topic) + "].";
    char id[16];
    std::snprintf(id, sizeof id, "doc%03zu", doc);
    pc.topic_of[thematic::corpus::make_sent_id(id, in_doc)] = topic;
    if (++in_doc == per_doc) flush();
  }
  flush();
  return pc;
}

void write_documents(const PlantedCorpus& pc, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [id, text] : pc.documents) std::ofstream(dir + "/" + id + ".txt") << text << "\n";
}

}  // namespace testing
