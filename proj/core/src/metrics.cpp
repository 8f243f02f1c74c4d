#include "rwnet/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rwnet/error.hpp"

namespace rwnet {

HittingTimes hitting_times(const FundamentalMatrix& f) {
  return HittingTimes{f.targets, f.transient, f.f.rowwise().sum()};
}

Vector expected_outgoing_cost(const TransitionMatrix& tm, const Matrix& cost) {
  if (cost.rows() != tm.size() || cost.cols() != tm.size()) {
    throw ValidationError("metrics", "cost matrix shape does not match the transition matrix");
  }
  for (Index i = 0; i < tm.size(); ++i) {
    for (Index j = 0; j < tm.size(); ++j) {
      if (tm.p(i, j) > 0.0 && !(cost(i, j) >= 0.0)) {
        throw ValidationError("metrics", "edge " + std::to_string(i) + "->" + std::to_string(j) +
                                             " has no valid cost");
      }
    }
  }
  return tm.p.cwiseProduct(cost).rowwise().sum();
}

HittingCosts hitting_costs(const FundamentalMatrix& f, const TransitionMatrix& tm, const Matrix& cost) {
  HittingCosts out;
  out.targets = f.targets;
  out.transient = f.transient;
  out.r = expected_outgoing_cost(tm, cost);
  Vector r_t(static_cast<Index>(f.transient.size()));
  for (std::size_t k = 0; k < f.transient.size(); ++k) r_t(static_cast<Index>(k)) = out.r(f.transient[k]);
  out.lh = f.f * r_t;
  return out;
}

CommuteMatrix commute(const Matrix& pairwise_hitting) {
  if (pairwise_hitting.rows() != pairwise_hitting.cols()) {
    throw ValidationError("metrics", "pairwise hitting matrix must be square");
  }
  CommuteMatrix out{pairwise_hitting + pairwise_hitting.transpose()};
  out.c.diagonal().setZero();
  return out;
}

CommuteMatrix commute_costs(const Matrix& pairwise_costs) { return commute(pairwise_costs); }

double KirchhoffReport::max_relative_disagreement() const {
  const double values[] = {from_commute, from_laplacian, from_tensor};
  const double hi = *std::max_element(std::begin(values), std::end(values));
  const double lo = *std::min_element(std::begin(values), std::end(values));
  const double scale = std::max({std::abs(hi), std::abs(lo), 1e-300});
  return (hi - lo) / scale;
}

KirchhoffReport kirchhoff_index(const FundamentalTensor& f, const TransitionMatrix& tm, double edge_count,
                                double tolerance) {
  if (!(edge_count > 0.0)) throw ValidationError("metrics", "edge count must be positive");
  const Index n = f.size();
  KirchhoffReport report;
  report.edge_count = edge_count;

  const Matrix c = commute(f.hitting_matrix()).c;
  report.from_commute = c.sum() / (2.0 * edge_count);

  const Matrix lplus = f.route() == LaplacianRoute::Digraph ? f.laplacian_pinv()
                                                            : linalg::pinv(digraph_laplacian(tm, f.stationary()));
  report.from_laplacian = static_cast<double>(n) * lplus.trace() / edge_count;

  report.from_tensor = f.total() / edge_count;

  if (report.max_relative_disagreement() > tolerance) {
    throw NumericalError("metrics", "Kirchhoff index routes disagree (commute " + std::to_string(report.from_commute) +
                                        ", laplacian " + std::to_string(report.from_laplacian) + ", tensor " +
                                        std::to_string(report.from_tensor) + "); check the edge-count convention");
  }
  return report;
}

Matrix laplacian_hitting(const Matrix& lplus, const Vector& pi) {
  const Index n = lplus.rows();
  const Vector a = lplus * pi;
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) h(i, j) = i == j ? 0.0 : a(i) - a(j) + lplus(j, j) - lplus(i, j);
  }
  return h;
}

Matrix laplacian_commute(const Matrix& lplus) {
  const Index n = lplus.rows();
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) c(i, j) = i == j ? 0.0 : lplus(i, i) + lplus(j, j) - lplus(i, j) - lplus(j, i);
  }
  return c;
}

Matrix laplacian_hitting_costs(const Matrix& lplus, const Vector& pi, const Vector& r) {
  const Index n = lplus.rows();
  const Vector g = r.cwiseProduct(pi);
  const double total = g.sum();
  const Vector b = lplus * g;
  Matrix u(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) u(i, j) = i == j ? 0.0 : b(i) - b(j) + (lplus(j, j) - lplus(i, j)) * total;
  }
  return u;
}

Matrix laplacian_commute_costs(const Matrix& lplus, const Vector& pi, const Vector& r) {
  return laplacian_commute(lplus) * r.cwiseProduct(pi).sum();
}

}  // namespace rwnet
