#include "thematic/cluster/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thematic/error.hpp"

namespace thematic::cluster {
namespace {

// Upper-triangle distance storage for i < j.
class CondensedMatrix {
 public:
  explicit CondensedMatrix(std::size_t n) : n_(n), data_(n < 2 ? 0 : n * (n - 1) / 2) {}

  double& at(std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    return data_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Strict "a is preferred over b" for candidate merges. Slot indices double as
// smallest member indices, so (lo, hi) is the tie-break key.
struct Candidate {
  double distance = std::numeric_limits<double>::infinity();
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = std::numeric_limits<std::size_t>::max();
};

bool preferred(const Candidate& a, const Candidate& b) noexcept {
  if (a.distance < b.distance - kTieTolerance) return true;
  if (a.distance > b.distance + kTieTolerance) return false;
  return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
}

Candidate make_candidate(double d, std::size_t i, std::size_t j) noexcept {
  return Candidate{d, std::min(i, j), std::max(i, j)};
}

void check_threshold(double threshold) {
  if (!(threshold >= 0.0) || threshold > 2.0) {
    throw ParameterError("distance threshold must lie in [0, 2], got " + std::to_string(threshold));
  }
}

// Replays the first `applied` merges with union-find and numbers clusters by
// first member in input order.
ClusterAssignment replay(const MergeTrace& trace, std::size_t applied, ClusterParams params) {
  const std::size_t n = trace.n;
  std::vector<std::size_t> parent(n + trace.merges.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t j = 0; j < applied; ++j) {
    const Merge& m = trace.merges[j];
    parent[find(m.left)] = n + j;
    parent[find(m.right)] = n + j;
  }

  ClusterAssignment out;
  out.params = std::move(params);
  out.labels.resize(n);
  std::vector<std::size_t> id_of_root(parent.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (id_of_root[r] == std::numeric_limits<std::size_t>::max()) {
      id_of_root[r] = out.sizes.size();
      out.sizes.push_back(0);
    }
    out.labels[i] = id_of_root[r];
    ++out.sizes[out.labels[i]];
  }
  return out;
}

MergeTrace build_trace(std::span<const EmbeddingVector> vectors, Linkage linkage) {
  const std::size_t n = vectors.size();
  MergeTrace trace;
  trace.n = n;
  trace.linkage = linkage;
  if (n < 2) return trace;
  trace.merges.reserve(n - 1);

  CondensedMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist.at(i, j) = cosine_distance(vectors[i], vectors[j]);
  }

  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), std::size_t{0});
  std::vector<Candidate> nearest(n);

  auto recompute = [&](std::size_t i) {
    Candidate best;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      Candidate c = make_candidate(dist.at(i, j), i, j);
      if (preferred(c, best)) best = c;
    }
    nearest[i] = best;
  };
  auto partner = [](const Candidate& c, std::size_t i) { return c.lo == i ? c.hi : c.lo; };

  for (std::size_t i = 0; i < n; ++i) recompute(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    Candidate best;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && preferred(nearest[i], best)) best = nearest[i];
    }
    const std::size_t a = best.lo;
    const std::size_t b = best.hi;
    trace.merges.push_back(Merge{node[a], node[b], best.distance});

    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double dak = dist.at(a, k);
      const double dbk = dist.at(b, k);
      double d = 0.0;
      switch (linkage) {
        case Linkage::kSingle: d = std::min(dak, dbk); break;
        case Linkage::kComplete: d = std::max(dak, dbk); break;
        case Linkage::kAverage: d = (na * dak + nb * dbk) / (na + nb); break;
      }
      dist.at(a, k) = d;
    }
    active[b] = 0;
    size[a] += size[b];
    node[a] = n + step;

    recompute(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      const std::size_t p = partner(nearest[k], k);
      if (p == a || p == b) {
        recompute(k);
      } else {
        Candidate c = make_candidate(dist.at(a, k), a, k);
        if (preferred(c, nearest[k])) nearest[k] = c;
      }
    }
  }
  return trace;
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(sizes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ParameterError("cosine distance on vectors of different dimension (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine distance undefined for a zero vector");
  const double d = 1.0 - dot / std::sqrt(nu * nv);
  return std::clamp(d, 0.0, 2.0);
}

double cosine_distance(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine_distance(u.values(), v.values());
}

std::pair<ClusterAssignment, MergeTrace> agglomerate(std::span<const EmbeddingVector> vectors,
                                                     const ClusterParams& params) {
  const std::size_t n = vectors.size();
  if (n == 0) throw ParameterError("agglomerate needs at least one vector");
  if (const auto* c = std::get_if<CountCut>(&params.cut)) {
    if (c->k < 1 || c->k > n) {
      throw ParameterError("cluster count k=" + std::to_string(c->k) + " outside [1, " + std::to_string(n) + "]");
    }
  } else {
    check_threshold(std::get<ThresholdCut>(params.cut).threshold);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].dim() != vectors[0].dim()) {
      throw ParameterError("vector " + std::to_string(i) + " has dimension " + std::to_string(vectors[i].dim()) +
                           ", expected " + std::to_string(vectors[0].dim()));
    }
    if (vectors[i].norm() == 0.0) {
      throw DomainError("zero vector at index " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
    }
  }

  MergeTrace trace = build_trace(vectors, params.linkage);
  ClusterAssignment assignment = std::holds_alternative<CountCut>(params.cut)
                                     ? cut_by_count(trace, std::get<CountCut>(params.cut).k)
                                     : cut_by_threshold(trace, std::get<ThresholdCut>(params.cut).threshold);
  assignment.params = params;
  return {std::move(assignment), std::move(trace)};
}

ClusterAssignment cut_by_threshold(const MergeTrace& trace, double threshold) {
  check_threshold(threshold);
  std::size_t applied = 0;
  while (applied < trace.merges.size() && trace.merges[applied].distance <= threshold) ++applied;
  return replay(trace, applied, ClusterParams{trace.linkage, ThresholdCut{threshold}});
}

ClusterAssignment cut_by_count(const MergeTrace& trace, std::size_t k) {
  if (k < 1 || k > trace.n) {
    throw ParameterError("cluster count k=" + std::to_string(k) + " outside [1, " + std::to_string(trace.n) + "]");
  }
  return replay(trace, trace.n - k, ClusterParams{trace.linkage, CountCut{k}});
}

std::string to_string(Linkage l) {
  switch (l) {
    case Linkage::kAverage: return "average";
    case Linkage::kComplete: return "complete";
    case Linkage::kSingle: return "single";
  }
  return "average";
}

Linkage linkage_from_string(const std::string& s) {
  if (s == "average") return Linkage::kAverage;
  if (s == "complete") return Linkage::kComplete;
  if (s == "single") return Linkage::kSingle;
  throw ConfigError("unknown linkage '" + s + "' (expected average, complete or single)");
}

}  // namespace thematic::cluster
