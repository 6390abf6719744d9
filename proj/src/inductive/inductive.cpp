#include "thematic/inductive/inductive.hpp"

#include <algorithm>

#include "thematic/error.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/util/digest.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/parallel.hpp"
#include "thematic/util/random.hpp"
#include "thematic/util/text.hpp"

namespace thematic::inductive {

using nlohmann::json;
using providers::EmbeddingVector;

std::string render_summary_prompt(const std::vector<std::string>& sentences) {
  return prompts::bulleted(prompts::kSummaryPreamble, sentences);
}

std::string render_label_prompt(const std::vector<std::string>& summaries) {
  return prompts::bulleted(prompts::kLabelPreamble, summaries);
}

std::string strip_commonality(std::string_view response, bool* found) {
  std::string_view s = text::trim(response);
  std::string_view rest;
  bool has = text::strip_prefix_ci(s, prompts::kSummaryMarker, &rest);
  if (found) *found = has;
  return std::string(text::trim(has ? rest : s));
}

std::string clean_label(std::string_view response) {
  std::string_view s = text::trim(response);
  std::string_view rest;
  if (text::strip_prefix_ci(s, prompts::kLabelMarker, &rest)) s = text::trim(rest);
  if (!s.empty() && s.back() == '.') s = text::trim(s.substr(0, s.size() - 1));
  while (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = text::trim(s.substr(1, s.size() - 2));
  }
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  return std::string(text::trim(s));
}

SummaryResult summarize_cluster(const std::vector<std::string>& sentences, providers::Generator& gen,
                                std::size_t max_sentences, std::uint64_t seed) {
  if (sentences.empty()) throw ParameterError("summarize_cluster: cluster has no sentences");
  SummaryResult result;
  std::vector<std::string> shown;
  if (max_sentences > 0 && sentences.size() > max_sentences) {
    for (std::size_t i : sample_indices(sentences.size(), max_sentences, seed)) shown.push_back(sentences[i]);
    result.sampled = true;
  } else {
    shown = sentences;
  }
  const std::string prompt = render_summary_prompt(shown);

  bool found = false;
  for (int attempt = 0; attempt < 2 && !found; ++attempt) {
    result.raw_response = gen.generate({prompt}).text;
    result.summary_text = strip_commonality(result.raw_response, &found);
  }
  if (!found || result.summary_text.empty()) {
    result.unparsed = true;
    result.summary_text = std::string(text::trim(result.raw_response));
  }
  result.overlength = text::word_count(result.summary_text) > kSummaryWordLimit;
  return result;
}

LabelResult label_theme(const std::vector<std::string>& summaries, providers::Generator& gen) {
  if (summaries.empty()) throw ParameterError("label_theme: no summaries to label");
  const std::string prompt = render_label_prompt(summaries);
  LabelResult result;
  auto valid = [](const std::string& label) {
    std::size_t words = text::word_count(label);
    return words >= 1 && words <= kLabelMaxWords;
  };
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      result.raw_response = gen.generate({prompt}).text;
    } catch (const EmptyResponseError&) {
      result.raw_response.clear();
      if (attempt == 0) continue;
    }
    result.label_text = clean_label(result.raw_response);
    if (valid(result.label_text)) return result;
  }
  result.unparsed = true;
  std::vector<std::string> words;
  for (const auto& w : text::split(text::collapse_whitespace(result.label_text), ' ')) {
    if (!w.empty() && words.size() < kLabelMaxWords) words.push_back(w);
  }
  result.label_text = words.empty() ? "Unlabeled theme" : text::join(words, " ");
  return result;
}

namespace {

json embeddings_to_jsonl_rows(const std::vector<std::string>& ids, const std::vector<EmbeddingVector>& vecs) {
  json rows = json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.push_back(json{{"id", ids[i]},
                        {"vector", std::vector<double>(vecs[i].values().begin(), vecs[i].values().end())}});
  }
  return rows;
}

std::vector<EmbeddingVector> embeddings_from_jsonl(const std::string& content, std::size_t expected) {
  std::vector<EmbeddingVector> out;
  for (const auto& line : text::split(content, '\n')) {
    if (text::trim(line).empty()) continue;
    out.emplace_back(json::parse(line).at("vector").get<std::vector<double>>());
  }
  if (out.size() != expected) {
    throw StageError("embedding artifact holds " + std::to_string(out.size()) + " vectors, expected " +
                     std::to_string(expected));
  }
  return out;
}

std::string rows_to_jsonl(const json& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += io::dump(r);
    out.push_back('\n');
  }
  return out;
}

std::uint64_t cluster_seed(std::uint64_t seed, std::size_t cluster_id) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (cluster_id + 1));
  return splitmix64(state);
}

// Decides whether each stage is loaded from the store or recomputed. Once a
// stage is recomputed every later stage is recomputed too.
class StagePlan {
 public:
  StagePlan(StageStore* store, bool resume) : store_(store), reuse_allowed_(resume && store != nullptr) {}

  bool reuse(const std::string& stage) {
    if (!reuse_allowed_) return false;
    if (store_->stage_complete(stage)) return true;
    reuse_allowed_ = false;
    return false;
  }

  void computed(const std::string& stage, const std::vector<std::string>& artifacts) {
    if (!store_) return;
    const auto& names = stage_names();
    auto it = std::find(names.begin(), names.end(), stage);
    for (auto later = it + 1; later < names.end(); ++later) store_->invalidate(*later);
    store_->mark_complete(stage, artifacts);
    reuse_allowed_ = false;
  }

  void write(const std::string& name, const std::string& content) {
    if (store_) store_->write_artifact(name, content);
  }
  std::string read(const std::string& name) { return store_->read_artifact(name); }

 private:
  StageStore* store_;
  bool reuse_allowed_;
};

std::vector<EmbeddingVector> embed_stage(StagePlan& plan, const std::string& stage, const std::string& artifact,
                                         const std::vector<std::string>& ids, const std::vector<std::string>& texts,
                                         providers::Embedder& embedder) {
  if (plan.reuse(stage)) return embeddings_from_jsonl(plan.read(artifact), texts.size());
  std::vector<EmbeddingVector> vecs = embedder.embed_batch(texts);
  plan.write(artifact, rows_to_jsonl(embeddings_to_jsonl_rows(ids, vecs)));
  plan.computed(stage, {artifact});
  return vecs;
}

cluster::ClusterAssignment cluster_stage(StagePlan& plan, const std::string& stage, const std::string& round,
                                         const std::vector<EmbeddingVector>& vecs,
                                         const cluster::ClusterParams& params) {
  const std::string clusters_file = "clusters_" + round + ".json";
  const std::string trace_file = "merge_trace_" + round + ".json";
  if (plan.reuse(stage)) {
    cluster::ClusterAssignment a = cluster::assignment_from_json(json::parse(plan.read(clusters_file)));
    if (a.labels.size() != vecs.size()) throw StageError(clusters_file + " does not match its embeddings");
    // Changed cluster parameters invalidate this stage and everything after it.
    if (a.params == params) return a;
  }
  auto [assignment, trace] = cluster::agglomerate(vecs, params);
  plan.write(clusters_file, io::dump_pretty(cluster::to_json(assignment)));
  plan.write(trace_file, io::dump(cluster::to_json(trace)) + "\n");
  plan.computed(stage, {clusters_file, trace_file});
  return assignment;
}

}  // namespace

std::optional<Codebook> run_inductive(const corpus::Corpus& corpus, const InductiveConfig& cfg,
                                      providers::Embedder& embedder, providers::Generator& gen,
                                      StageStore* store) {
  if (corpus.sentences.empty()) throw ValidationError("corpus has no sentences to analyze");
  if (cfg.stop_after) {
    const auto& names = stage_names();
    if (std::find(names.begin(), names.end(), *cfg.stop_after) == names.end()) {
      throw ConfigError("unknown stage '" + *cfg.stop_after + "'");
    }
  }
  auto stop_here = [&](const std::string& stage) { return cfg.stop_after && *cfg.stop_after == stage; };
  StagePlan plan(store, cfg.resume);
  const std::size_t in_flight = gen.config().max_in_flight;

  // Embed and cluster sentences.
  std::vector<std::string> sent_ids, sent_texts;
  for (const auto& s : corpus.sentences) {
    sent_ids.push_back(s.sent_id);
    sent_texts.push_back(s.text);
  }
  auto vecs1 = embed_stage(plan, "embed_round1", "embeddings_round1.jsonl", sent_ids, sent_texts, embedder);
  if (stop_here("embed_round1")) return std::nullopt;
  auto clusters1 = cluster_stage(plan, "cluster_round1", "round1", vecs1, cfg.round1);
  if (stop_here("cluster_round1")) return std::nullopt;
  const auto members1 = clusters1.members();

  // Summarize every sentence cluster.
  std::vector<ClusterSummary> summaries(members1.size());
  if (plan.reuse("summarize_round1")) {
    std::size_t i = 0;
    for (const auto& line : text::split(plan.read("summaries_round1.jsonl"), '\n')) {
      if (text::trim(line).empty()) continue;
      if (i >= summaries.size()) throw StageError("summaries_round1.jsonl has extra records");
      summaries[i++] = summary_from_json(json::parse(line));
    }
    if (i != summaries.size()) throw StageError("summaries_round1.jsonl is missing records");
  } else {
    parallel_for(members1.size(), in_flight, [&](std::size_t c) {
      std::vector<std::string> texts;
      ClusterSummary& s = summaries[c];
      s.cluster_id = c;
      for (std::size_t idx : members1[c]) {
        texts.push_back(sent_texts[idx]);
        s.member_sent_ids.push_back(sent_ids[idx]);
      }
      SummaryResult r = summarize_cluster(texts, gen, cfg.max_cluster_sentences, cluster_seed(cfg.seed, c));
      s.summary_text = std::move(r.summary_text);
      s.raw_response = std::move(r.raw_response);
      s.unparsed = r.unparsed;
      s.sampled = r.sampled;
      s.overlength = r.overlength;
    });
    json rows = json::array();
    for (const auto& s : summaries) rows.push_back(to_json(s));
    plan.write("summaries_round1.jsonl", rows_to_jsonl(rows));
    plan.computed("summarize_round1", {"summaries_round1.jsonl"});
  }
  if (stop_here("summarize_round1")) return std::nullopt;

  // Embed and cluster the summaries.
  std::vector<std::string> summary_ids, summary_texts;
  for (const auto& s : summaries) {
    summary_ids.push_back(std::to_string(s.cluster_id));
    summary_texts.push_back(s.summary_text.empty() ? s.raw_response : s.summary_text);
  }
  auto vecs2 = embed_stage(plan, "embed_round2", "embeddings_round2.jsonl", summary_ids, summary_texts, embedder);
  if (stop_here("embed_round2")) return std::nullopt;
  auto clusters2 = cluster_stage(plan, "cluster_round2", "round2", vecs2, cfg.round2);
  if (stop_here("cluster_round2")) return std::nullopt;
  const auto members2 = clusters2.members();

  // Label every summary cluster.
  std::vector<ThemeLabel> themes(members2.size());
  if (plan.reuse("label_themes")) {
    json j = json::parse(plan.read("themes.json"));
    if (j.at("themes").size() != themes.size()) throw StageError("themes.json does not match round-2 clusters");
    for (std::size_t t = 0; t < themes.size(); ++t) themes[t] = theme_from_json(j.at("themes").at(t));
  } else {
    parallel_for(members2.size(), in_flight, [&](std::size_t t) {
      std::vector<std::string> texts;
      for (std::size_t idx : members2[t]) texts.push_back(summaries[idx].summary_text);
      LabelResult r = label_theme(texts, gen);
      themes[t] = ThemeLabel{t, std::move(r.label_text), std::move(r.raw_response), members2[t], r.unparsed};
    });
    json arr = json::array();
    for (const auto& t : themes) arr.push_back(to_json(t));
    plan.write("themes.json", io::dump_pretty(json{{"themes", arr}}));
    plan.computed("label_themes", {"themes.json"});
  }
  if (stop_here("label_themes")) return std::nullopt;

  Codebook book;
  for (const auto& theme : themes) {
    Theme entry{theme, {}};
    for (std::size_t sid : theme.member_summary_ids) {
      CodebookEntry ce{summaries[sid], {}};
      for (std::size_t idx : members1[summaries[sid].cluster_id]) {
        ce.exemplars.push_back(Exemplar{sent_ids[idx], sent_texts[idx]});
      }
      entry.summaries.push_back(std::move(ce));
    }
    book.themes.push_back(std::move(entry));
  }
  plan.write("codebook.json", io::dump_pretty(to_json(book)));
  plan.computed("codebook", {"codebook.json"});
  return book;
}

json to_json(const ClusterSummary& s) {
  return json{{"cluster_id", s.cluster_id},           {"summary", s.summary_text},
              {"raw_response", s.raw_response},       {"member_sent_ids", s.member_sent_ids},
              {"unparsed", s.unparsed},               {"sampled", s.sampled},
              {"overlength", s.overlength}};
}

ClusterSummary summary_from_json(const json& j) {
  ClusterSummary s;
  s.cluster_id = j.at("cluster_id").get<std::size_t>();
  s.summary_text = j.at("summary").get<std::string>();
  s.raw_response = j.at("raw_response").get<std::string>();
  s.member_sent_ids = j.at("member_sent_ids").get<std::vector<std::string>>();
  s.unparsed = j.value("unparsed", false);
  s.sampled = j.value("sampled", false);
  s.overlength = j.value("overlength", false);
  return s;
}

json to_json(const ThemeLabel& t) {
  return json{{"theme_id", t.theme_id},
              {"label", t.label_text},
              {"raw_response", t.raw_response},
              {"member_summary_ids", t.member_summary_ids},
              {"unparsed", t.unparsed}};
}

ThemeLabel theme_from_json(const json& j) {
  return ThemeLabel{j.at("theme_id").get<std::size_t>(), j.at("label").get<std::string>(),
                    j.at("raw_response").get<std::string>(),
                    j.at("member_summary_ids").get<std::vector<std::size_t>>(), j.value("unparsed", false)};
}

json to_json(const Codebook& c) {
  json themes = json::array();
  for (const auto& t : c.themes) {
    json summaries = json::array();
    for (const auto& e : t.summaries) {
      json exemplars = json::array();
      for (const auto& x : e.exemplars) exemplars.push_back(json{{"sent_id", x.sent_id}, {"text", x.text}});
      json sj = to_json(e.summary);
      sj.erase("member_sent_ids");
      sj["exemplars"] = exemplars;
      summaries.push_back(std::move(sj));
    }
    json tj = to_json(t.label);
    tj.erase("member_summary_ids");
    tj["summaries"] = summaries;
    themes.push_back(std::move(tj));
  }
  return json{{"themes", themes}};
}

Codebook codebook_from_json(const json& j) {
  Codebook c;
  for (const auto& tj : j.at("themes")) {
    Theme t;
    t.label.theme_id = tj.at("theme_id").get<std::size_t>();
    t.label.label_text = tj.at("label").get<std::string>();
    t.label.raw_response = tj.at("raw_response").get<std::string>();
    t.label.unparsed = tj.value("unparsed", false);
    for (const auto& sj : tj.at("summaries")) {
      CodebookEntry e;
      e.summary.cluster_id = sj.at("cluster_id").get<std::size_t>();
      e.summary.summary_text = sj.at("summary").get<std::string>();
      e.summary.raw_response = sj.at("raw_response").get<std::string>();
      e.summary.unparsed = sj.value("unparsed", false);
      e.summary.sampled = sj.value("sampled", false);
      e.summary.overlength = sj.value("overlength", false);
      for (const auto& x : sj.at("exemplars")) {
        e.exemplars.push_back(Exemplar{x.at("sent_id").get<std::string>(), x.at("text").get<std::string>()});
        e.summary.member_sent_ids.push_back(e.exemplars.back().sent_id);
      }
      t.label.member_summary_ids.push_back(e.summary.cluster_id);
      t.summaries.push_back(std::move(e));
    }
    c.themes.push_back(std::move(t));
  }
  return c;
}

}  // namespace thematic::inductive
