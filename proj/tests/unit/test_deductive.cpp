#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/error.hpp"
#include "thematic/providers/mock.hpp"
#include "thematic/util/io.hpp"

using namespace thematic;
using namespace thematic::deductive;

namespace {

LabelSet careers() { return LabelSet::load(testing::data_path("labelsets/onet_15_17.json")); }
LabelSet factors() { return LabelSet::load(testing::data_path("labelsets/career_satisfaction_16.json")); }

std::vector<corpus::SentenceRecord> sentences_of(const std::vector<testing::AuditRow>& rows) {
  std::vector<corpus::SentenceRecord> out;
  for (const auto& r : rows) out.push_back({corpus::make_sent_id(r.doc_id, 0), r.doc_id, 0, r.text});
  return out;
}

providers::Generator strict_generator(std::map<std::string, std::string> fixtures) {
  auto backend = std::make_shared<providers::MockGenerativeBackend>(std::move(fixtures), true, 0);
  return providers::Generator(backend, testing::mock_config());
}

}  // namespace

TEST_CASE("label sets load and validate") {
  auto c = careers();
  CHECK(c.kind() == PromptKind::kCareers);
  CHECK(c.labels().size() == 73);
  CHECK(c.max_comma_span() >= 2);
  auto f = factors();
  CHECK(f.kind() == PromptKind::kFactors);
  CHECK(f.labels().size() == 16);
  CHECK(f.canonical("making MONEY") == "Making money");
  CHECK_FALSE(f.canonical("money").has_value());
  CHECK_THROWS_AS(LabelSet("x", {}, PromptKind::kCareers), ConfigError);
  CHECK_THROWS_AS(LabelSet("x", {"A b", "a B"}, PromptKind::kCareers), ConfigError);
  CHECK_THROWS_AS(LabelSet::from_json(nlohmann::json{{"name", "x"}, {"labels", {"a"}}, {"prompt_kind", "other"}}),
                  ConfigError);
  CHECK(LabelSet::from_json(f.to_json()).labels() == f.labels());
}

TEST_CASE("parser: lead-in, case folding and canonical output") {
  auto f = factors();
  CHECK(parse_label_response("List: making money", f) == ParsedLabels{{"Making money"}, {}});
  CHECK(parse_label_response("list:Helping others, making money.", f).labels ==
        std::vector<std::string>{"Helping others", "Making money"});
  CHECK(parse_label_response("Making money, making money", f).labels.size() == 1);
}

TEST_CASE("parser: the careers example yields exactly two labels") {
  auto p = parse_label_response("Information Security Analysts, Software Quality Assurance Analysts and Testers",
                                careers());
  CHECK(p.labels ==
        std::vector<std::string>{"Information Security Analysts", "Software Quality Assurance Analysts and Testers"});
  CHECK(p.unmatched.empty());
}

TEST_CASE("parser: N/A variants give no labels") {
  for (const char* r : {"N/A", "n/a", "N/A.", "  N/A  ", "List: N/A", "n/a!"}) {
    CAPTURE(r);
    auto p = parse_label_response(r, factors());
    CHECK(p.labels.empty());
    CHECK(p.unmatched.empty());
  }
  CHECK(parse_label_response("", factors()) == ParsedLabels{});
}

TEST_CASE("parser: unknown pieces are kept aside") {
  auto p = parse_label_response("List: Making money, Being famous", factors());
  CHECK(p.labels == std::vector<std::string>{"Making money"});
  CHECK(p.unmatched == std::vector<std::string>{"Being famous"});
}

TEST_CASE("parser: labels containing commas are rejoined") {
  auto c = careers();
  std::string comma_label;
  for (const auto& l : c.labels())
    if (l.find(", ") != std::string::npos) {
      comma_label = l;
      break;
    }
  REQUIRE_FALSE(comma_label.empty());
  auto p = parse_label_response("Database Architects, " + comma_label + ", Surveyors", c);
  CHECK(p.labels == std::vector<std::string>{"Database Architects", comma_label, "Surveyors"});
  CHECK(p.unmatched.empty());
}

TEST_CASE("rendering dispatches on the prompt kind") {
  CHECK(render_prompt(careers(), "x").find("CAREERS LIST: [") != std::string::npos);
  CHECK(render_prompt(factors(), "x").find("Career satisfaction factors: [") != std::string::npos);
  CHECK_THROWS_AS(render_careers_prompt(factors(), "x"), ParameterError);
}

TEST_CASE("label bookkeeping over the audit fixtures") {
  struct Case {
    const char* file;
    LabelSet set;
    std::size_t expected;
  };
  for (auto& tc : {Case{"onet_audit.jsonl", careers(), 235}, Case{"factors_audit.jsonl", factors(), 150}}) {
    CAPTURE(tc.file);
    auto rows = testing::load_audit_rows(tc.file);
    REQUIRE(rows.size() == 100);
    auto gen = strict_generator(testing::audit_fixture_map(rows, tc.set));
    ApplyOptions opts;
    opts.max_in_flight = 4;
    auto apps = apply_label_set(sentences_of(rows), tc.set, gen, opts);
    REQUIRE(apps.size() == rows.size());
    std::size_t applied = 0;
    for (std::size_t i = 0; i < apps.size(); ++i) {
      CHECK(apps[i].sent_id == corpus::make_sent_id(rows[i].doc_id, 0));
      CHECK(apps[i].labels == rows[i].labels);
      CHECK(apps[i].unmatched.empty());
      applied += apps[i].labels.size();
    }
    CHECK(applied == tc.expected);
    std::size_t hist_total = 0;
    for (const auto& [label, n] : label_histogram(apps, tc.set)) hist_total += n;
    CHECK(hist_total == tc.expected);
  }
}

TEST_CASE("histogram lists every label, zero when unused") {
  auto f = factors();
  std::vector<LabelApplication> apps{{"d#0", f.name(), {}, "N/A", {}}, {"d#1", f.name(), {}, "N/A", {}}};
  auto h = label_histogram(apps, f);
  CHECK(h.size() == 16);
  for (const auto& [label, n] : h) CHECK(n == 0);
}

TEST_CASE("completed applications are reused") {
  auto f = factors();
  std::vector<corpus::SentenceRecord> sents{{"a#0", "a", 0, "I want money."}, {"b#0", "b", 0, "I like helping others."}};
  auto backend = std::make_shared<testing::ScriptedGenerative>([](const std::string&) { return "List: Helping others"; });
  providers::Generator gen(backend, testing::mock_config());
  std::map<std::string, LabelApplication> done{{"a#0", {"a#0", f.name(), {"Making money"}, "List: Making money", {}}}};
  std::vector<std::string> fresh;
  ApplyOptions opts;
  opts.completed = &done;
  opts.on_complete = [&](const LabelApplication& a) { fresh.push_back(a.sent_id); };
  auto apps = apply_label_set(sents, f, gen, opts);
  CHECK(backend->calls() == 1);
  CHECK(fresh == std::vector<std::string>{"b#0"});
  CHECK(apps[0].labels == std::vector<std::string>{"Making money"});
  CHECK(apps[1].labels == std::vector<std::string>{"Helping others"});
  CHECK(application_from_json(to_json(apps[1])) == apps[1]);
}

TEST_CASE("worked labeling examples through the strict mock") {
  auto cfg = testing::mock_config();
  cfg.mock.strict = true;
  cfg.mock.fixtures_path = testing::data_path("fixtures/worked_fixtures.json");
  providers::Generator gen(providers::make_generative_backend(cfg), cfg);
  auto ex = io::read_json(testing::data_path("fixtures/worked_examples.json"));
  for (const char* kind : {"careers", "factors"}) {
    for (const auto& e : ex[kind]) {
      auto set = LabelSet::load(testing::data_path("labelsets/" + e["label_set"].get<std::string>()));
      auto apps = apply_label_set({{"x#0", "x", 0, e["statement"].get<std::string>()}}, set, gen);
      CHECK(apps[0].labels == e["expected"].get<std::vector<std::string>>());
    }
  }
}
