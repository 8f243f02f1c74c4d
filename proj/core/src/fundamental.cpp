#include "rwnet/fundamental.hpp"

#include <algorithm>
#include <string>

#include "rwnet/error.hpp"
#include "rwnet/parallel.hpp"

namespace rwnet {

namespace {

std::string describe(const NodeSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(set[i]);
  }
  return out + "}";
}

NodeSet checked_targets(Index n, std::span<const Index> targets) {
  if (targets.empty()) throw ValidationError("fundamental", "target set must be nonempty");
  for (Index t : targets) {
    if (t < 0 || t >= n) throw ValidationError("fundamental", "target index " + std::to_string(t) + " out of range");
  }
  return make_node_set(targets);
}

const Vector& require_pi(const TransitionMatrix& tm, std::optional<Vector>& scratch) {
  if (tm.stationary) return *tm.stationary;
  scratch = stationary_distribution(tm);
  return *scratch;
}

}  // namespace

std::optional<Index> FundamentalMatrix::position(Index v) const {
  auto it = std::lower_bound(transient.begin(), transient.end(), v);
  if (it == transient.end() || *it != v) return std::nullopt;
  return static_cast<Index>(it - transient.begin());
}

double FundamentalMatrix::at(Index s, Index m) const {
  auto ps = position(s);
  auto pm = position(m);
  if (!ps || !pm) return 0.0;
  return f(*ps, *pm);
}

std::vector<Index> FundamentalMatrix::position_map() const {
  std::vector<Index> map(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < transient.size(); ++k) map[static_cast<std::size_t>(transient[k])] = static_cast<Index>(k);
  return map;
}

FundamentalMatrix fundamental_matrix(const TransitionMatrix& tm, std::span<const Index> targets) {
  const Index n = tm.size();
  FundamentalMatrix out;
  out.n = n;
  out.targets = checked_targets(n, targets);
  for (const NodeSet& cls : recurrent_classes(tm.p)) {
    const bool covered = std::any_of(cls.begin(), cls.end(), [&](Index v) {
      return std::binary_search(out.targets.begin(), out.targets.end(), v);
    });
    if (!covered) {
      throw ValidationError("fundamental", "target set misses recurrent class " + describe(cls) +
                                               "; the fundamental matrix does not exist");
    }
  }
  out.transient = linalg::complement(n, out.targets);
  Matrix m = -linalg::gather(tm.p, out.transient, out.transient);
  m.diagonal().array() += 1.0;
  out.f = linalg::inverse(m);
  return out;
}

FundamentalMatrix incremental_fundamental(const FundamentalMatrix& f, std::span<const Index> add) {
  if (add.empty()) return f;
  const NodeSet extra = make_node_set(add);
  std::vector<Index> drop;
  drop.reserve(extra.size());
  for (Index v : extra) {
    if (v < 0 || v >= f.n) throw ValidationError("fundamental", "node " + std::to_string(v) + " out of range");
    auto pos = f.position(v);
    if (!pos) {
      throw ValidationError("fundamental", "node " + std::to_string(v) + " is already a target");
    }
    drop.push_back(*pos);
  }
  FundamentalMatrix out;
  out.n = f.n;
  out.f = linalg::submatrix_inverse(f.f, drop);
  std::set_union(f.targets.begin(), f.targets.end(), extra.begin(), extra.end(), std::back_inserter(out.targets));
  std::set_difference(f.transient.begin(), f.transient.end(), extra.begin(), extra.end(),
                      std::back_inserter(out.transient));
  return out;
}

double AbsorptionMatrix::at(Index s, Index a) const {
  auto ta = std::lower_bound(targets.begin(), targets.end(), a);
  if (ta == targets.end() || *ta != a) throw ValidationError("fundamental", "node " + std::to_string(a) + " is not a target");
  if (s == a) return 1.0;
  auto ts = std::lower_bound(transient.begin(), transient.end(), s);
  if (ts == transient.end() || *ts != s) return 0.0;
  return q(ts - transient.begin(), ta - targets.begin());
}

AbsorptionMatrix absorption_probabilities(const TransitionMatrix& tm, std::span<const Index> targets) {
  FundamentalMatrix fm = fundamental_matrix(tm, targets);
  AbsorptionMatrix out;
  out.q = fm.f * linalg::gather(tm.p, fm.transient, fm.targets);
  out.targets = std::move(fm.targets);
  out.transient = std::move(fm.transient);
  return out;
}

FundamentalTensor::FundamentalTensor(Matrix laplacian_pinv, Vector stationary, LaplacianRoute route,
                                     Index materialize_limit)
    : pinv_(std::move(laplacian_pinv)), pi_(std::move(stationary)), route_(route) {
  const Index n = pinv_.rows();
  if (pinv_.cols() != n || pi_.size() != n) throw ValidationError("fundamental", "tensor: dimension mismatch");
  if (n > materialize_limit) return;
  auto data = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n * n * n));
  // Row-major copy so the inner loop over m is contiguous. Same arithmetic as
  // compute(), so dense and lazy tensors agree bit for bit.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = pinv_;
  const bool digraph = route_ == LaplacianRoute::Digraph;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    std::vector<double> ratio(static_cast<std::size_t>(n));
    for (auto t = static_cast<Index>(begin); t < static_cast<Index>(end); ++t) {
      double* block = data->data() + t * n * n;
      const double* row_t = rows.data() + t * n;
      const double ptt = rows(t, t);
      for (Index m = 0; m < n; ++m) ratio[static_cast<std::size_t>(m)] = pi_(m) / pi_(t);
      for (Index s = 0; s < n; ++s) {
        double* out = block + s * n;
        if (s == t) {
          std::fill(out, out + n, 0.0);
          continue;
        }
        const double* row_s = rows.data() + s * n;
        const double pst = rows(s, t);
        if (digraph) {
          for (Index m = 0; m < n; ++m) out[m] = (row_s[m] - row_t[m] + ptt - pst) * pi_(m);
        } else {
          for (Index m = 0; m < n; ++m) out[m] = row_s[m] - row_t[m] + ratio[static_cast<std::size_t>(m)] * (ptt - pst);
        }
        out[t] = 0.0;
      }
    }
  });
  dense_ = std::move(data);
}

double FundamentalTensor::compute(Index s, Index m, Index t) const {
  if (s == t || m == t) return 0.0;
  if (route_ == LaplacianRoute::Digraph) {
    return (pinv_(s, m) - pinv_(t, m) + pinv_(t, t) - pinv_(s, t)) * pi_(m);
  }
  return pinv_(s, m) - pinv_(t, m) + (pi_(m) / pi_(t)) * (pinv_(t, t) - pinv_(s, t));
}

Matrix FundamentalTensor::slice(Index t) const {
  const Index n = size();
  if (t < 0 || t >= n) throw ValidationError("fundamental", "slice target out of range");
  Matrix out(n, n);
  for (Index s = 0; s < n; ++s) {
    for (Index m = 0; m < n; ++m) out(s, m) = (*this)(s, m, t);
  }
  return out;
}

Matrix FundamentalTensor::weighted_hitting_matrix(const Vector& r) const {
  const Index n = size();
  if (r.size() != n) throw ValidationError("fundamental", "weight vector length mismatch");
  Matrix h = Matrix::Zero(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto t = static_cast<Index>(begin); t < static_cast<Index>(end); ++t) {
      for (Index s = 0; s < n; ++s) {
        double acc = 0.0;
        for (Index m = 0; m < n; ++m) acc += (*this)(s, m, t) * r(m);
        h(s, t) = acc;
      }
    }
  });
  return h;
}

Matrix FundamentalTensor::hitting_matrix() const { return weighted_hitting_matrix(Vector::Ones(size())); }

Vector FundamentalTensor::medial_sums() const {
  const Index n = size();
  Vector sums = Vector::Zero(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (auto m = static_cast<Index>(begin); m < static_cast<Index>(end); ++m) {
      double acc = 0.0;
      for (Index t = 0; t < n; ++t) {
        for (Index s = 0; s < n; ++s) acc += (*this)(s, m, t);
      }
      sums(m) = acc;
    }
  });
  return sums;
}

double FundamentalTensor::total() const { return medial_sums().sum(); }

Matrix digraph_laplacian(const TransitionMatrix& tm, const Vector& pi) {
  return pi.asDiagonal() * random_walk_laplacian(tm);
}

Matrix random_walk_laplacian(const TransitionMatrix& tm) {
  Matrix l = -tm.p;
  l.diagonal().array() += 1.0;
  return l;
}

FundamentalTensor fundamental_tensor(const TransitionMatrix& tm, const TensorOptions& options) {
  std::optional<Vector> scratch;
  const Vector& pi = require_pi(tm, scratch);
  return fundamental_tensor(tm, pi, options);
}

FundamentalTensor fundamental_tensor(const TransitionMatrix& tm, const Vector& pi, const TensorOptions& options) {
  if (!strongly_connected(tm.p)) {
    throw ValidationError("fundamental",
                          "fundamental tensor needs a strongly connected graph; use fundamental_matrix per target set");
  }
  if (pi.size() != tm.size()) throw ValidationError("fundamental", "stationary vector length mismatch");
  Matrix plus = options.route == LaplacianRoute::Digraph ? linalg::pinv(digraph_laplacian(tm, pi))
                                                         : linalg::pinv(random_walk_laplacian(tm));
  return FundamentalTensor(std::move(plus), pi, options.route, options.materialize_limit);
}

Matrix ergodic_fundamental_matrix(const TransitionMatrix& tm, const Vector& pi) {
  const Index n = tm.size();
  Matrix c = random_walk_laplacian(tm);
  c.noalias() += Vector::Ones(n) * pi.transpose();
  return linalg::inverse(c);
}

Matrix random_walk_laplacian_pinv_via_z(const Matrix& z, const Vector& pi) {
  // I - P = Z^{-1} - 1 pi'.
  return linalg::pinv_from_regular_inverse(z, Vector::Ones(z.rows()), pi);
}

FundamentalTensor tensor_via_z(const TransitionMatrix& tm, const Vector& pi, Index materialize_limit) {
  if (!strongly_connected(tm.p)) {
    throw ValidationError("fundamental", "tensor_via_z needs an ergodic (strongly connected) chain");
  }
  const Matrix z = ergodic_fundamental_matrix(tm, pi);
  return FundamentalTensor(random_walk_laplacian_pinv_via_z(z, pi), pi, LaplacianRoute::RandomWalk,
                           materialize_limit);
}

NormalizedTensor normalize_tensor(FundamentalTensor f) { return NormalizedTensor(std::move(f)); }

}  // namespace rwnet
