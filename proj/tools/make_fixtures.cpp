// Builds a mock fixture file (prompt digest -> reply) from worked examples.
// usage: make_fixtures <examples.json> <labelset-dir> <out.json>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "thematic/audit/audit.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/inductive/inductive.hpp"
#include "thematic/providers/mock.hpp"
#include "thematic/util/io.hpp"

using nlohmann::json;
namespace th = thematic;

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: make_fixtures <examples.json> <labelset-dir> <out.json>\n";
    return 2;
  }
  try {
    const json ex = th::io::read_json(argv[1]);
    const std::filesystem::path sets = argv[2];
    json out = json::object();
    auto add = [&](const std::string& prompt, const json& reply) {
      out[th::providers::prompt_digest(prompt)] = reply.get<std::string>();
    };
    for (const auto& e : ex.at("summaries")) {
      add(th::inductive::render_summary_prompt(e.at("sentences").get<std::vector<std::string>>()), e.at("reply"));
    }
    for (const auto& e : ex.at("labels")) {
      add(th::inductive::render_label_prompt(e.at("summaries").get<std::vector<std::string>>()), e.at("reply"));
    }
    for (const char* kind : {"careers", "factors"}) {
      for (const auto& e : ex.at(kind)) {
        auto set = th::deductive::LabelSet::load((sets / e.at("label_set").get<std::string>()).string());
        add(th::deductive::render_prompt(set, e.at("statement").get<std::string>()), e.at("reply"));
      }
    }
    for (const auto& e : ex.at("accuracy")) {
      add(th::audit::render_accuracy_prompt(e.at("label").get<std::string>(), e.at("comment").get<std::string>()),
          e.at("reply"));
    }
    th::io::atomic_write(argv[3], th::io::dump_pretty(out));
    std::cout << out.size() << " fixtures -> " << argv[3] << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
