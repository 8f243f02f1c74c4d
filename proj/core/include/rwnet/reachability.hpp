#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "rwnet/graph.hpp"

namespace rwnet {

/// Precomputed failure-set correction: holds W^{-1} = [F^{o}_{FF}]^{-1} so
/// each query is a |F| x |F| contraction.
class FailureView {
 public:
  const NodeSet& failed() const { return failed_; }
  bool is_failed(Index v) const;

 private:
  friend class ReachabilityOracle;
  NodeSet failed_;
  Matrix w_inv_;
};

struct GapMonitor {
  // Largest |value| classified unreachable and smallest value classified
  // reachable, both relative to max(F^{o}). A healthy oracle keeps them
  // orders of magnitude apart.
  double max_unreachable = 0.0;
  double min_reachable = 1.0;
};

/// Reachability oracle over G^o: F^{o}_{st} > 0 iff t is reachable from s,
/// and the Schur-corrected F^{S}_{st} with S = F u {o} answers the same
/// question after the nodes in F fail.
class ReachabilityOracle {
 public:
  ReachabilityOracle(Matrix f_o, double relative_threshold);

  Index size() const { return f_o_.rows(); }
  const Matrix& table() const { return f_o_; }
  double threshold() const { return threshold_; }

  bool query(Index s, Index t) const;
  // Throws ValidationError if s or t is in `failed`.
  bool query_with_failures(Index s, Index t, std::span<const Index> failed) const;
  bool query(const FailureView& view, Index s, Index t) const;
  // Schur-corrected value F^{S}_{st}; exposed for diagnostics.
  double corrected_value(const FailureView& view, Index s, Index t) const;

  /// Cached by sorted failure set; concurrent callers may both build the
  /// factorization but observe one cached instance afterwards.
  std::shared_ptr<const FailureView> failure_view(std::span<const Index> failed) const;

  GapMonitor gap() const;

 private:
  void check_index(Index v) const;
  void record(double value, bool reachable) const;

  Matrix f_o_;
  double threshold_;
  double scale_;
  mutable std::mutex cache_mutex_;
  mutable std::map<NodeSet, std::shared_ptr<const FailureView>> cache_;
  mutable std::atomic<double> max_unreachable_{0.0};
  mutable std::atomic<double> min_reachable_{1.0};
};

struct OracleOptions {
  // Zero threshold as a fraction of max(F^{o}).
  double relative_threshold = 1e-9;
  // Exogenous edge weight used for the oracle's own extension. Reachability
  // does not depend on it, but F^{o} entries decay like (d/(d+beta))^k along
  // a k-hop path, so a small weight keeps reachable values far above the
  // threshold.
  double beta = 0.01;
};

ReachabilityOracle build_oracle(const Graph& g, const OracleOptions& options = {});
// Uses the extension as given (its beta), ignoring options.beta.
ReachabilityOracle build_oracle(const ExtendedGraph& ext, const OracleOptions& options = {});

}  // namespace rwnet
