#include "thematic/providers/http.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>

#include "thematic/error.hpp"
#include "thematic/providers/mock.hpp"
#include "thematic/util/io.hpp"

namespace thematic::providers {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

Endpoint split_base_url(const std::string& base_url) {
  std::size_t scheme = base_url.find("://");
  std::size_t path_start = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  Endpoint e;
  e.origin = base_url.substr(0, path_start);
  if (path_start != std::string::npos) e.prefix = base_url.substr(path_start);
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

std::string post_json(const ProviderConfig& cfg, const std::string& route, const json& body) {
  Endpoint ep = split_base_url(cfg.base_url);
  httplib::Client cli(ep.origin);
  cli.set_connection_timeout(cfg.timeout_seconds, 0);
  cli.set_read_timeout(cfg.timeout_seconds, 0);
  cli.set_write_timeout(cfg.timeout_seconds, 0);

  httplib::Headers headers;
  if (!cfg.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  auto res = cli.Post(ep.prefix + route, headers, io::dump(body), "application/json");
  if (!res) throw TransportError("request to " + cfg.base_url + route + " failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("HTTP " + std::to_string(res->status) + " from " + cfg.base_url + route, res->status);
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("HTTP " + std::to_string(res->status) + " from " + cfg.base_url + route + ": " + res->body,
                        res->status, 1);
  }
  return res->body;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed provider response: ") + e.what());
  }
}

}  // namespace

HttpChatBackend::HttpChatBackend(ProviderConfig cfg) : cfg_(std::move(cfg)) {}

std::string HttpChatBackend::complete(const std::string& prompt, std::string& raw) {
  json body{{"model", cfg_.model_name},
            {"temperature", cfg_.temperature},
            {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})}};
  raw = post_json(cfg_, "/chat/completions", body);
  json j = parse_body(raw);
  try {
    const json& content = j.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected chat response shape: ") + e.what());
  }
}

std::string HttpChatBackend::identity() const { return cfg_.identity(); }

HttpEmbeddingBackend::HttpEmbeddingBackend(ProviderConfig cfg) : cfg_(std::move(cfg)) {}

std::vector<std::vector<double>> HttpEmbeddingBackend::embed(std::span<const std::string> texts) {
  json input = json::array();
  for (const auto& t : texts) input.push_back(t);
  json j = parse_body(post_json(cfg_, "/embeddings", json{{"model", cfg_.embedding_model_name()}, {"input", input}}));
  try {
    const json& data = j.at("data");
    std::vector<std::vector<double>> out(data.size());
    std::vector<char> seen(data.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::size_t index = data[i].value("index", i);
      if (index >= out.size() || seen[index]) throw TransportError("embedding response has bad index");
      seen[index] = 1;
      out[index] = data[i].at("embedding").get<std::vector<double>>();
    }
    return out;
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected embedding response shape: ") + e.what());
  }
}

std::string HttpEmbeddingBackend::identity() const { return cfg_.embedding_identity(); }

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const ProviderConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ProviderKind::kLive) return std::make_shared<HttpEmbeddingBackend>(cfg);
  return std::make_shared<MockEmbeddingBackend>(cfg.mock, cfg.seed.value_or(0));
}

std::shared_ptr<GenerativeBackend> make_generative_backend(const ProviderConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ProviderKind::kLive) return std::make_shared<HttpChatBackend>(cfg);
  std::map<std::string, std::string> fixtures;
  if (!cfg.mock.fixtures_path.empty()) fixtures = MockGenerativeBackend::load_fixtures(cfg.mock.fixtures_path);
  return std::make_shared<MockGenerativeBackend>(std::move(fixtures), cfg.mock.strict, cfg.seed.value_or(0));
}

}  // namespace thematic::providers
