#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "thematic/app/commands.hpp"
#include "thematic/audit/audit.hpp"
#include "thematic/cluster/cluster.hpp"
#include "thematic/corpus/corpus.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/error.hpp"
#include "thematic/inductive/inductive.hpp"
#include "thematic/providers/mock.hpp"

namespace py = pybind11;
namespace th = thematic;

namespace {

std::vector<th::providers::EmbeddingVector> to_vectors(const std::vector<std::vector<double>>& rows) {
  std::vector<th::providers::EmbeddingVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r);
  return out;
}

th::audit::AccuracyVerdict verdict_from_dict(const py::dict& d) {
  th::audit::AccuracyVerdict v;
  v.sent_id = d["sent_id"].cast<std::string>();
  v.label = d["label"].cast<std::string>();
  if (d.contains("score") && !d["score"].is_none()) v.score = d["score"].cast<int>();
  if (d.contains("raw_response")) v.raw_response = d["raw_response"].cast<std::string>();
  v.flagged = d.contains("flagged") ? d["flagged"].cast<bool>() : true;
  return v;
}

py::dict verdict_to_dict(const th::audit::AccuracyVerdict& v) {
  py::dict d;
  d["sent_id"] = v.sent_id;
  d["label"] = v.label;
  d["score"] = v.score ? py::object(py::int_(*v.score)) : py::object(py::none());
  d["raw_response"] = v.raw_response;
  d["flagged"] = v.flagged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_thematic, m) {
  m.doc() = "Thematic analysis pipeline core";

  auto error = py::register_exception<th::Error>(m, "Error");
  py::register_exception<th::ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<th::ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<th::ProviderError>(m, "ProviderError", error.ptr());
  py::register_exception<th::StageError>(m, "StageError", error.ptr());

  m.def(
      "clean_text",
      [](const std::string& raw, const std::optional<std::string>& rules_json) {
        auto rules = rules_json ? th::corpus::CleaningRules::from_json(nlohmann::json::parse(*rules_json))
                                : th::corpus::CleaningRules{};
        return th::corpus::clean_text(raw, rules);
      },
      py::arg("raw"), py::arg("rules_json") = py::none());

  m.def(
      "segment",
      [](const std::string& doc_id, const std::string& raw) {
        th::corpus::CleaningRules rules;
        th::corpus::Document d{doc_id, raw, th::corpus::clean_text(raw, rules)};
        std::vector<std::pair<std::string, std::string>> out;
        for (auto& s : th::corpus::segment_sentences(d, rules.abbreviations)) out.emplace_back(s.sent_id, s.text);
        return out;
      },
      py::arg("doc_id"), py::arg("raw"), "Clean with default rules and split into (sent_id, text) pairs.");

  m.def(
      "cosine_distance",
      [](const std::vector<double>& u, const std::vector<double>& v) { return th::cluster::cosine_distance(u, v); },
      py::arg("u"), py::arg("v"));

  m.def(
      "agglomerate",
      [](const std::vector<std::vector<double>>& rows, const std::string& linkage, std::optional<std::size_t> k,
         std::optional<double> threshold) {
        if (k.has_value() == threshold.has_value()) throw th::ParameterError("give exactly one of k and threshold");
        th::cluster::ClusterParams p;
        p.linkage = th::cluster::linkage_from_string(linkage);
        if (k) {
          p.cut = th::cluster::CountCut{*k};
        } else {
          p.cut = th::cluster::ThresholdCut{*threshold};
        }
        auto vecs = to_vectors(rows);
        auto [assignment, trace] = th::cluster::agglomerate(vecs, p);
        std::vector<std::tuple<std::size_t, std::size_t, double>> merges;
        for (const auto& mg : trace.merges) merges.emplace_back(mg.left, mg.right, mg.distance);
        return py::make_tuple(assignment.labels, merges);
      },
      py::arg("vectors"), py::arg("linkage") = "average", py::arg("k") = py::none(),
      py::arg("threshold") = py::none(), "Returns (labels, merges).");

  m.def("mock_embedding", [](const std::string& text, std::size_t dim, std::uint64_t seed, bool planted) {
        auto v = planted ? th::providers::mock_embedding_planted(text, dim, seed, 0.25)
                         : th::providers::mock_embedding(text, dim, seed);
        return std::vector<double>(v.values().begin(), v.values().end());
      },
      py::arg("text"), py::arg("dim") = 64, py::arg("seed") = 0, py::arg("planted") = false);

  m.def("render_summary_prompt", &th::inductive::render_summary_prompt, py::arg("sentences"));
  m.def("render_label_prompt", &th::inductive::render_label_prompt, py::arg("summaries"));
  m.def(
      "strip_commonality", [](const std::string& s) { return th::inductive::strip_commonality(s); },
      py::arg("response"));
  m.def(
      "render_prompt",
      [](const std::string& label_set_path, const std::string& text) {
        return th::deductive::render_prompt(th::deductive::LabelSet::load(label_set_path), text);
      },
      py::arg("label_set_path"), py::arg("text"));
  m.def(
      "parse_label_response",
      [](const std::string& response, const std::string& label_set_path) {
        auto parsed = th::deductive::parse_label_response(response, th::deductive::LabelSet::load(label_set_path));
        return py::make_tuple(parsed.labels, parsed.unmatched);
      },
      py::arg("response"), py::arg("label_set_path"), "Returns (labels, unmatched).");

  m.def("render_accuracy_prompt", &th::audit::render_accuracy_prompt, py::arg("label"), py::arg("comment"));
  m.def("parse_score", &th::audit::parse_score, py::arg("response"));
  m.def(
      "flag_verdicts",
      [](const std::vector<py::dict>& verdicts, int threshold) {
        std::vector<th::audit::AccuracyVerdict> vs;
        for (const auto& d : verdicts) vs.push_back(verdict_from_dict(d));
        py::list out;
        for (const auto& v : th::audit::flag_verdicts(vs, threshold)) out.append(verdict_to_dict(v));
        return out;
      },
      py::arg("verdicts"), py::arg("threshold") = th::audit::kDefaultFlagThreshold);
  m.def(
      "agreement_report",
      [](const std::vector<py::dict>& verdicts, const std::vector<std::tuple<std::string, std::string, std::string>>& reviews,
         int threshold) {
        std::vector<th::audit::AccuracyVerdict> vs;
        for (const auto& d : verdicts) vs.push_back(verdict_from_dict(d));
        std::vector<th::audit::HumanReview> rs;
        for (const auto& [sid, label, verdict] : reviews) {
          rs.push_back({sid, label, th::audit::verdict_from_string(verdict)});
        }
        return th::audit::to_json(th::audit::agreement_report(vs, rs, threshold)).dump();
      },
      py::arg("verdicts"), py::arg("reviews"), py::arg("threshold") = th::audit::kDefaultFlagThreshold,
      "Report as a JSON string.");
  m.def(
      "export_review_sheet",
      [](const std::vector<py::dict>& verdicts, bool flagged_only) {
        std::vector<th::audit::AccuracyVerdict> vs;
        for (const auto& d : verdicts) vs.push_back(verdict_from_dict(d));
        return th::audit::export_review_sheet(vs, flagged_only);
      },
      py::arg("verdicts"), py::arg("flagged_only") = false);
  m.def(
      "import_review_sheet",
      [](const std::string& csv) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& r : th::audit::import_review_sheet(csv)) {
          out.emplace_back(r.sent_id, r.label, th::audit::to_string(r.verdict));
        }
        return out;
      },
      py::arg("csv_text"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = th::app::run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (exit_code, stdout, stderr).");
}
