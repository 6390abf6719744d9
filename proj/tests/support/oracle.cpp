#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace testing {

using thematic::cluster::Linkage;

double oracle_cosine(const std::vector<double>& u, const std::vector<double>& v) {
  long double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<long double>(u[i]) * v[i];
    uu += static_cast<long double>(u[i]) * u[i];
    vv += static_cast<long double>(v[i]) * v[i];
  }
  double d = static_cast<double>(1.0L - dot / std::sqrt(uu * vv));
  return std::clamp(d, 0.0, 2.0);
}

std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  for (auto l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
  return out;
}

namespace {

// stop(best_distance, cluster_count) decides whether to halt before merging.
template <typename Stop>
std::vector<std::size_t> run(const std::vector<std::vector<double>>& pts, Linkage linkage, Stop stop) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = oracle_cosine(pts[i], pts[j]);

  // Each cluster is a sorted member list; clusters kept sorted by first member.
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

  auto link = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
    for (auto x : a)
      for (auto y : b) {
        lo = std::min(lo, d[x][y]);
        hi = std::max(hi, d[x][y]);
        sum += d[x][y];
      }
    switch (linkage) {
      case Linkage::kSingle: return lo;
      case Linkage::kComplete: return hi;
      case Linkage::kAverage: break;
    }
    return sum / static_cast<double>(a.size() * b.size());
  };

  const double tol = thematic::cluster::kTieTolerance;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double v = link(clusters[a], clusters[b]);
        // Pairs are visited in (first member, first member) order, so a
        // strict improvement beyond the tolerance is the only way to win.
        if (v < best - tol) {
          best = v;
          ba = a;
          bb = b;
        }
      }
    }
    if (stop(best, clusters.size())) break;
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }

  std::vector<std::size_t> labels(n);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (auto m : clusters[c]) labels[m] = c;
  return canonical_labels(labels);
}

}  // namespace

std::vector<std::size_t> oracle_partition_k(const std::vector<std::vector<double>>& points, Linkage linkage,
                                            std::size_t k) {
  return run(points, linkage, [k](double, std::size_t count) { return count <= k; });
}

std::vector<std::size_t> oracle_partition_threshold(const std::vector<std::vector<double>>& points,
                                                    Linkage linkage, double threshold) {
  return run(points, linkage, [threshold](double best, std::size_t) { return best > threshold; });
}

}  // namespace testing
