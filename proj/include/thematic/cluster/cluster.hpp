#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "thematic/providers/types.hpp"

namespace thematic::cluster {

using providers::EmbeddingVector;

enum class Linkage { kAverage, kComplete, kSingle };

struct CountCut {
  std::size_t k = 1;
  bool operator==(const CountCut&) const = default;
};
struct ThresholdCut {
  double threshold = 0.35;
  bool operator==(const ThresholdCut&) const = default;
};

struct ClusterParams {
  Linkage linkage = Linkage::kAverage;
  std::variant<CountCut, ThresholdCut> cut = ThresholdCut{};

  bool operator==(const ClusterParams&) const = default;
};

/// Linkage distances within this tolerance are treated as ties.
inline constexpr double kTieTolerance = 1e-12;

struct Merge {
  /// Node ids: 0..n-1 are input items, n+j is the cluster created by merge j.
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;

  bool operator==(const Merge&) const = default;
};

struct MergeTrace {
  std::size_t n = 0;
  Linkage linkage = Linkage::kAverage;
  std::vector<Merge> merges;  // exactly n-1 entries

  bool operator==(const MergeTrace&) const = default;
};

struct ClusterAssignment {
  /// Dense ids 0..c-1, numbered by first appearance in input order.
  std::vector<std::size_t> labels;
  std::vector<std::size_t> sizes;
  ClusterParams params;

  std::size_t cluster_count() const noexcept { return sizes.size(); }
  /// Item indices per cluster, each list ascending.
  std::vector<std::vector<std::size_t>> members() const;

  bool operator==(const ClusterAssignment&) const = default;
};

/// 1 - u.v / (|u||v|), clamped to [0, 2]. Throws DomainError on a zero
/// vector and ParameterError on mismatched dimensions.
double cosine_distance(std::span<const double> u, std::span<const double> v);
double cosine_distance(const EmbeddingVector& u, const EmbeddingVector& v);

/// Agglomerative clustering under cosine distance. Starts from singletons and
/// repeatedly merges the pair with minimum linkage distance; ties within
/// kTieTolerance go to the pair whose smallest member indices are
/// lexicographically lowest. Returns the cut assignment and the full trace.
std::pair<ClusterAssignment, MergeTrace> agglomerate(std::span<const EmbeddingVector> vectors,
                                                     const ClusterParams& params);

/// Applies merges in order, stopping at the first whose distance exceeds
/// `threshold`.
ClusterAssignment cut_by_threshold(const MergeTrace& trace, double threshold);
/// Applies the first n-k merges.
ClusterAssignment cut_by_count(const MergeTrace& trace, std::size_t k);

std::string to_string(Linkage l);
Linkage linkage_from_string(const std::string& s);

nlohmann::json to_json(const ClusterParams& p);
ClusterParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClusterAssignment& a);
ClusterAssignment assignment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MergeTrace& t);
MergeTrace trace_from_json(const nlohmann::json& j);

}  // namespace thematic::cluster
