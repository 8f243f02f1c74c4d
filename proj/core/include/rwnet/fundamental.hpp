#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rwnet/graph.hpp"
#include "rwnet/linalg.hpp"

namespace rwnet {

/// F^A = (I - P_TT)^{-1} for a target (absorbing) set A, T = V \ A.
///
/// Entry (s, m) is the expected number of visits to m, starting at s, before
/// the walk first enters A. Rows and columns follow `transient` order.
struct FundamentalMatrix {
  Index n = 0;                   // node count of the underlying chain
  NodeSet targets;               // A
  std::vector<Index> transient;  // T, increasing
  Matrix f;

  // Position of node v inside `transient`, or nullopt for targets.
  std::optional<Index> position(Index v) const;
  // F^A_{sm} by node index; zero when s or m is a target.
  double at(Index s, Index m) const;

  std::vector<Index> position_map() const;
};

/// Builds F^A. Throws ValidationError if the target set is empty, out of range,
/// or misses a recurrent class (F^A would not exist).
FundamentalMatrix fundamental_matrix(const TransitionMatrix& tm, std::span<const Index> targets);

/// Incremental update: F^{S1 u S2} from F^{S1} by a Schur complement over
/// the S2 rows/columns, O(|S2|^3 + n^2 |S2|).
FundamentalMatrix incremental_fundamental(const FundamentalMatrix& f, std::span<const Index> add);

/// Q^A = F^A P_TA: |T| x |A| probabilities of being absorbed at each target.
struct AbsorptionMatrix {
  NodeSet targets;
  std::vector<Index> transient;
  Matrix q;

  // Probability that a walk from s is absorbed at target a (1/0 when s is itself a target).
  double at(Index s, Index a) const;
};

AbsorptionMatrix absorption_probabilities(const TransitionMatrix& tm, std::span<const Index> targets);

enum class LaplacianRoute {
  RandomWalk,  // F_smt from pinv(I - P)
  Digraph,     // F_smt from pinv(Pi (I - P))
};

struct TensorOptions {
  LaplacianRoute route = LaplacianRoute::RandomWalk;
  // Tensors with n <= materialize_limit store all n^3 entries; larger ones
  // evaluate entries on demand from the pseudo-inverse (O(1) each).
  Index materialize_limit = 300;
};

/// Fundamental tensor F_{smt} = F^{t}_{sm} (zero when s = t or m = t).
///
/// Backed by a single Laplacian pseudo-inverse; entries are either
/// materialized (slice-major, t outermost) or computed lazily.
class FundamentalTensor {
 public:
  FundamentalTensor(Matrix laplacian_pinv, Vector stationary, LaplacianRoute route, Index materialize_limit);

  Index size() const { return pinv_.rows(); }
  double operator()(Index s, Index m, Index t) const {
    if (dense_) return (*dense_)[static_cast<std::size_t>((t * size() + s) * size() + m)];
    return compute(s, m, t);
  }
  // n x n slice for target t (row t and column t are zero).
  Matrix slice(Index t) const;

  bool materialized() const { return dense_ != nullptr; }
  LaplacianRoute route() const { return route_; }
  const Matrix& laplacian_pinv() const { return pinv_; }
  const Vector& stationary() const { return pi_; }

  // Sum over s and t for every medial node m.
  Vector medial_sums() const;
  // H(s, t) = sum_m F_smt.
  Matrix hitting_matrix() const;
  // U(s, t) = sum_m F_smt r_m.
  Matrix weighted_hitting_matrix(const Vector& r) const;
  double total() const;

 private:
  double compute(Index s, Index m, Index t) const;

  Matrix pinv_;
  Vector pi_;
  LaplacianRoute route_;
  std::shared_ptr<const std::vector<double>> dense_;
};

// L = Pi (I - P) and L^p = I - P.
Matrix digraph_laplacian(const TransitionMatrix& tm, const Vector& pi);
Matrix random_walk_laplacian(const TransitionMatrix& tm);

/// Whole tensor from one SVD pseudo-inverse. Requires an irreducible chain;
/// pi is taken from `tm.stationary` or computed.
FundamentalTensor fundamental_tensor(const TransitionMatrix& tm, const TensorOptions& options = {});
FundamentalTensor fundamental_tensor(const TransitionMatrix& tm, const Vector& pi, const TensorOptions& options = {});

// Z = (I - P + 1 pi')^{-1}.
Matrix ergodic_fundamental_matrix(const TransitionMatrix& tm, const Vector& pi);
// pinv(I - P) from Z with one regular inversion.
Matrix random_walk_laplacian_pinv_via_z(const Matrix& z, const Vector& pi);

/// Same tensor as fundamental_tensor(), but pinv(I - P) is obtained from Z
/// by a rank-one correction rather than an SVD.
FundamentalTensor tensor_via_z(const TransitionMatrix& tm, const Vector& pi, Index materialize_limit = 300);

/// Normalized tensor F^_{smt} = F_{smt} / F_{mmt} (zero when s = t or m = t);
/// equals the probability that a walk from s hits m before t.
class NormalizedTensor {
 public:
  explicit NormalizedTensor(FundamentalTensor f) : f_(std::move(f)) {}

  Index size() const { return f_.size(); }
  double operator()(Index s, Index m, Index t) const {
    if (s == t || m == t) return 0.0;
    if (s == m) return 1.0;
    return f_(s, m, t) / f_(m, m, t);
  }
  const FundamentalTensor& base() const { return f_; }

 private:
  FundamentalTensor f_;
};

NormalizedTensor normalize_tensor(FundamentalTensor f);

}  // namespace rwnet
