#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "thematic/corpus/corpus.hpp"

namespace testing {

struct PlantedCorpus {
  /// Raw documents as (doc_id, text) pairs.
  std::vector<std::pair<std::string, std::string>> documents;
  /// sent_id -> planted topic.
  std::map<std::string, std::size_t> topic_of;
};

/// `per_topic * topics` sentences spread over documents of `per_doc`
/// sentences, topics interleaved so no document is single-topic. Every
/// sentence carries a `[topic:K]` tag and distinct wording.
PlantedCorpus make_planted_corpus(std::size_t topics, std::size_t per_topic, std::size_t per_doc = 10);

/// Writes the documents of `pc` as <doc_id>.txt files into `dir`.
void write_documents(const PlantedCorpus& pc, const std::string& dir);

}  // namespace testing
