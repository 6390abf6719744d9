#include "thematic/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <regex>
#include <set>

#include "thematic/error.hpp"
#include "thematic/util/text.hpp"

namespace thematic::corpus {
namespace {

using nlohmann::json;

std::regex compile(const std::string& pattern, const char* what) {
  try {
    return std::regex(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError(std::string("malformed ") + what + " pattern '" + pattern + "': " + e.what());
  }
}

bool ends_with_terminal_punctuation(std::string_view line) {
  line = text::trim(line);
  while (!line.empty() && (line.back() == '"' || line.back() == '\'' || line.back() == ')')) {
    line.remove_suffix(1);
  }
  if (line.empty()) return false;
  char c = line.back();
  return c == '.' || c == '!' || c == '?' || c == ':' || c == ';' || c == ',';
}

std::string strip_headings(const std::string& raw) {
  std::string normalized;
  normalized.reserve(raw.size());
  for (char c : raw) {
    if (c != '\r') normalized.push_back(c);
  }
  std::vector<std::string> lines = text::split(normalized, '\n');
  auto blank = [&](std::size_t i) { return text::trim(lines[i]).empty(); };

  std::vector<std::string> kept;
  kept.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool standalone = i == 0 || blank(i - 1);
    bool followed_by_blank = i + 1 < lines.size() && blank(i + 1);
    if (!blank(i) && standalone && followed_by_blank && !ends_with_terminal_punctuation(lines[i])) {
      continue;
    }
    kept.push_back(std::move(lines[i]));
  }
  return text::join(kept, "\n");
}

// Opening quote at s[k]: ASCII quotes or UTF-8 left curly quotes.
bool opens_quote(std::string_view s, std::size_t k) {
  if (s[k] == '"' || s[k] == '\'') return true;
  return s.substr(k, 3) == "\xE2\x80\x9C" || s.substr(k, 3) == "\xE2\x80\x98";
}

// Length of a closing mark at s[k]: terminal punctuation, ASCII quotes or
// brackets, or UTF-8 right curly quotes. Zero if none.
std::size_t closing_mark(std::string_view s, std::size_t k) {
  char c = s[k];
  if (c == '.' || c == '!' || c == '?' || c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (s.substr(k, 3) == "\xE2\x80\x9D" || s.substr(k, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

// Collapses whitespace and reattaches punctuation left dangling by removals
// ("rockets ." -> "rockets.").
std::string tidy(std::string_view in) {
  std::string collapsed = text::collapse_whitespace(in);
  std::string out;
  out.reserve(collapsed.size());
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    if (collapsed[i] == ' ' && i + 1 < collapsed.size()) {
      char n = collapsed[i + 1];
      if (n == '.' || n == ',' || n == '!' || n == '?' || n == ';' || n == ':') continue;
    }
    out.push_back(collapsed[i]);
  }
  return out;
}

}  // namespace

std::vector<std::string> CleaningRules::default_abbreviations() {
  return {"Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Mt.", "vs.",
          "e.g.", "i.e.", "U.S.", "U.S.A.", "U.K.", "Inc.", "Ltd.", "Co.", "No.", "Ph.D."};
}

CleaningRules CleaningRules::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("cleaning rules must be a JSON object");
  CleaningRules r;
  try {
    if (j.contains("parenthetical_pattern")) r.parenthetical_pattern = j.at("parenthetical_pattern").get<std::string>();
    if (j.contains("redaction_patterns")) r.redaction_patterns = j.at("redaction_patterns").get<std::vector<std::string>>();
    if (j.contains("heading_rule")) r.heading_rule = j.at("heading_rule").get<bool>();
    if (j.contains("abbreviations")) r.abbreviations = j.at("abbreviations").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid cleaning rules: ") + e.what());
  }
  compile(r.parenthetical_pattern, "parenthetical");
  for (const auto& p : r.redaction_patterns) compile(p, "redaction");
  return r;
}

CleaningRules CleaningRules::load(const std::string& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("cleaning rules file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json CleaningRules::to_json() const {
  return json{{"parenthetical_pattern", parenthetical_pattern},
              {"redaction_patterns", redaction_patterns},
              {"heading_rule", heading_rule},
              {"abbreviations", abbreviations}};
}

std::string make_sent_id(const std::string& doc_id, std::size_t index) {
  return doc_id + "#" + std::to_string(index);
}

std::string clean_text(const std::string& raw, const CleaningRules& rules) {
  std::vector<std::regex> patterns;
  if (!rules.parenthetical_pattern.empty()) {
    patterns.push_back(compile(rules.parenthetical_pattern, "parenthetical"));
  }
  for (const auto& p : rules.redaction_patterns) patterns.push_back(compile(p, "redaction"));

  std::string current = tidy(rules.heading_rule ? strip_headings(raw) : raw);
  // Removing one match can expose another (nested parentheses, names split
  // by collapsed whitespace), so iterate until nothing changes.
  for (;;) {
    std::string next = current;
    for (const auto& re : patterns) next = std::regex_replace(next, re, " ");
    next = tidy(next);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::vector<SentenceRecord> segment_sentences(const Document& doc,
                                              const std::vector<std::string>& abbreviations) {
  std::string_view s = doc.cleaned_text;
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  std::size_t token_start = 0;

  for (std::size_t i = 0; i < s.size(); ++i) {
    if (text::is_space(s[i])) {
      token_start = i + 1;
      continue;
    }
    if (s[i] != '.' && s[i] != '!' && s[i] != '?') continue;

    std::size_t j = i + 1;
    while (j < s.size()) {
      std::size_t len = closing_mark(s, j);
      if (len == 0) break;
      j += len;
    }
    if (j >= s.size() || !text::is_space(s[j])) {
      i = j - 1;
      continue;
    }
    std::size_t k = j;
    while (k < s.size() && text::is_space(s[k])) ++k;
    if (k >= s.size()) break;
    bool next_starts_sentence =
        std::isupper(static_cast<unsigned char>(s[k])) || opens_quote(s, k);
    std::string_view token = s.substr(token_start, j - token_start);
    while (!token.empty() && (token.front() == '"' || token.front() == '\'' || token.front() == '(')) {
      token.remove_prefix(1);
    }
    bool guarded = std::find(abbreviations.begin(), abbreviations.end(), token) != abbreviations.end();
    if (next_starts_sentence && !guarded) {
      pieces.push_back(s.substr(start, j - start));
      start = k;
    }
    i = k - 1;
    token_start = k;
  }
  if (start < s.size()) pieces.push_back(s.substr(start));

  std::vector<SentenceRecord> out;
  for (std::string_view p : pieces) {
    p = text::trim(p);
    if (p.size() < kMinSentenceChars) continue;
    std::size_t index = out.size();
    out.push_back(SentenceRecord{make_sent_id(doc.doc_id, index), doc.doc_id, index, std::string(p)});
  }
  return out;
}

Corpus build_corpus(const std::vector<std::pair<std::string, std::string>>& inputs,
                    const CleaningRules& rules) {
  std::set<std::string> seen;
  for (const auto& [id, raw] : inputs) {
    if (id.empty()) throw ValidationError("document id must be non-empty");
    if (!seen.insert(id).second) throw ValidationError("duplicate document id: " + id);
  }
  Corpus c;
  c.documents.reserve(inputs.size());
  for (const auto& [id, raw] : inputs) {
    Document d{id, raw, clean_text(raw, rules)};
    auto records = segment_sentences(d, rules.abbreviations);
    c.sentences.insert(c.sentences.end(), std::make_move_iterator(records.begin()),
                       std::make_move_iterator(records.end()));
    c.documents.push_back(std::move(d));
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> read_text_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("input directory does not exist: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  if (ec) throw ConfigError("cannot list directory " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    try {
      out.emplace_back(f.stem().string(), text::read_file(f.string()));
    } catch (const ConfigError&) {
      throw ConfigError("unreadable input file: " + f.string());
    }
  }
  return out;
}

json to_json(const SentenceRecord& s) {
  return json{{"sent_id", s.sent_id}, {"doc_id", s.doc_id}, {"index", s.index}, {"text", s.text}};
}

SentenceRecord sentence_from_json(const json& j) {
  return SentenceRecord{j.at("sent_id").get<std::string>(), j.at("doc_id").get<std::string>(),
                        j.at("index").get<std::size_t>(), j.at("text").get<std::string>()};
}

}  // namespace thematic::corpus
