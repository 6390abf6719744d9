#include "thematic/cluster/cluster.hpp"
#include "thematic/error.hpp"

namespace thematic::cluster {

using nlohmann::json;

json to_json(const ClusterParams& p) {
  json j{{"linkage", to_string(p.linkage)}};
  if (const auto* c = std::get_if<CountCut>(&p.cut)) {
    j["k"] = c->k;
  } else {
    j["threshold"] = std::get<ThresholdCut>(p.cut).threshold;
  }
  return j;
}

ClusterParams params_from_json(const json& j) {
  ClusterParams p;
  try {
    if (j.contains("linkage")) p.linkage = linkage_from_string(j.at("linkage").get<std::string>());
    const bool has_k = j.contains("k") && !j.at("k").is_null();
    const bool has_t = j.contains("threshold") && !j.at("threshold").is_null();
    if (has_k && has_t) throw ConfigError("cluster params: set exactly one of k and threshold");
    if (has_k) {
      p.cut = CountCut{j.at("k").get<std::size_t>()};
    } else if (has_t) {
      p.cut = ThresholdCut{j.at("threshold").get<double>()};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid cluster params: ") + e.what());
  }
  return p;
}

json to_json(const ClusterAssignment& a) {
  return json{{"params", to_json(a.params)}, {"labels", a.labels}, {"sizes", a.sizes}};
}

ClusterAssignment assignment_from_json(const json& j) {
  ClusterAssignment a;
  a.params = params_from_json(j.at("params"));
  a.labels = j.at("labels").get<std::vector<std::size_t>>();
  a.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  return a;
}

json to_json(const MergeTrace& t) {
  json merges = json::array();
  for (const auto& m : t.merges) merges.push_back(json::array({m.left, m.right, m.distance}));
  return json{{"n", t.n}, {"linkage", to_string(t.linkage)}, {"merges", merges}};
}

MergeTrace trace_from_json(const json& j) {
  MergeTrace t;
  t.n = j.at("n").get<std::size_t>();
  t.linkage = linkage_from_string(j.value("linkage", std::string("average")));
  for (const auto& m : j.at("merges")) {
    t.merges.push_back(Merge{m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(), m.at(2).get<double>()});
  }
  if (t.n > 0 && t.merges.size() != t.n - 1) {
    throw ValidationError("merge trace for " + std::to_string(t.n) + " items must hold " +
                          std::to_string(t.n - 1) + " merges");
  }
  return t;
}

}  // namespace thematic::cluster
