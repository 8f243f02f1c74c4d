#include "rwnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rwnet/error.hpp"
#include "rwnet/parallel.hpp"

namespace rwnet {

Closeness closeness(const FundamentalTensor& f) {
  const Index n = f.size();
  Closeness out;
  out.total_hitting = f.hitting_matrix().colwise().sum().transpose();
  out.reciprocal = Vector(n);
  for (Index t = 0; t < n; ++t) {
    out.reciprocal(t) = out.total_hitting(t) > 0.0 ? static_cast<double>(n) / out.total_hitting(t) : 0.0;
  }
  return out;
}

Vector betweenness_rw(const FundamentalTensor& f) { return f.medial_sums(); }

Vector betweenness_newman(const FundamentalTensor& f, const TransitionMatrix& tm) {
  const Index n = f.size();
  if (tm.size() != n) throw ValidationError("centrality", "transition matrix size does not match tensor");
  // Neighbours in either direction; other k contribute nothing.
  std::vector<std::vector<Index>> touch(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    for (Index k = 0; k < n; ++k) {
      if (tm.p(m, k) > 0.0 || tm.p(k, m) > 0.0) touch[static_cast<std::size_t>(m)].push_back(k);
    }
  }
  Vector out = Vector::Zero(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Index>(begin); m < static_cast<Index>(end); ++m) {
      double acc = 0.0;
      for (Index t = 0; t < n; ++t) {
        for (Index s = 0; s < n; ++s) {
          const double fsmt = f(s, m, t);
          double flow = 0.0;
          for (Index k : touch[static_cast<std::size_t>(m)]) {
            flow += std::abs(fsmt * tm.p(m, k) - f(s, k, t) * tm.p(k, m));
          }
          acc += 0.5 * flow;
        }
      }
      out(m) = acc;
    }
  });
  return out;
}

Vector load(const NormalizedTensor& fhat) {
  const Index n = fhat.size();
  Vector out = Vector::Zero(n);
  if (n < 2) return out;
  const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 1);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Index>(begin); m < static_cast<Index>(end); ++m) {
      double acc = 0.0;
      for (Index s = 0; s < n; ++s) {
        for (Index t = 0; t < n; ++t) acc += fhat(s, m, t);
      }
      out(m) = acc / denom;
    }
  });
  return out;
}

std::vector<Index> ascending_order(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) < values(b); });
  return order;
}

ArticulationReport articulation_points(const NormalizedTensor& fhat, const Matrix& adjacency, double eps) {
  const Index n = fhat.size();
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw ValidationError("centrality", "adjacency size does not match the tensor");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("centrality", "eps must lie in [0, 1)");
  ArticulationReport report;
  for (Index m = 0; m < n; ++m) {
    ArticulationRecord rec{m, {}, 0, 0};
    for (Index s = 0; s < n; ++s) {
      for (Index t = 0; t < n; ++t) {
        if (s == t || m == t) continue;
        if (fhat(s, m, t) < 1.0 - eps) continue;
        const bool trivial = s == m;
        if (!trivial) {
          const Index removed[] = {m};
          if (reachable(adjacency, s, t, removed)) {
            ++report.rejected;
            continue;
          }
        }
        rec.pairs.push_back({s, t, trivial});
        ++rec.count;
        if (!trivial) ++rec.nontrivial;
      }
    }
    if (rec.count > 0) report.records.push_back(std::move(rec));
  }
  return report;
}

}  // namespace rwnet
