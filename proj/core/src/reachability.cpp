#include "rwnet/reachability.hpp"

#include <algorithm>
#include <cmath>

#include "rwnet/error.hpp"

namespace rwnet {

namespace {

void atomic_max(std::atomic<double>& slot, double value) {
  double cur = slot.load(std::memory_order_relaxed);
  while (value > cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

void atomic_min(std::atomic<double>& slot, double value) {
  double cur = slot.load(std::memory_order_relaxed);
  while (value < cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

}  // namespace

bool FailureView::is_failed(Index v) const { return std::binary_search(failed_.begin(), failed_.end(), v); }

ReachabilityOracle::ReachabilityOracle(Matrix f_o, double relative_threshold) : f_o_(std::move(f_o)) {
  if (f_o_.rows() != f_o_.cols()) throw ValidationError("reachability", "oracle table must be square");
  if (!(relative_threshold > 0.0 && relative_threshold < 1.0)) {
    throw ValidationError("reachability", "relative threshold must lie in (0, 1)");
  }
  scale_ = f_o_.size() == 0 ? 1.0 : f_o_.cwiseAbs().maxCoeff();
  threshold_ = relative_threshold * scale_;
}

void ReachabilityOracle::check_index(Index v) const {
  if (v < 0 || v >= size()) {
    throw ValidationError("reachability", "node index " + std::to_string(v) + " out of range");
  }
}

void ReachabilityOracle::record(double value, bool reachable) const {
  const double rel = std::abs(value) / scale_;
  if (reachable) {
    atomic_min(min_reachable_, rel);
  } else {
    atomic_max(max_unreachable_, rel);
  }
}

bool ReachabilityOracle::query(Index s, Index t) const {
  check_index(s);
  check_index(t);
  if (s == t) return true;
  const double v = f_o_(s, t);
  const bool hit = v > threshold_;
  record(v, hit);
  return hit;
}

std::shared_ptr<const FailureView> ReachabilityOracle::failure_view(std::span<const Index> failed) const {
  NodeSet key = make_node_set(failed);
  for (Index v : key) check_index(v);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto view = std::make_shared<FailureView>();
  view->failed_ = key;
  if (!key.empty()) view->w_inv_ = linalg::inverse(linalg::gather(f_o_, key, key));
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(std::move(key), std::move(view));
  return it->second;
}

double ReachabilityOracle::corrected_value(const FailureView& view, Index s, Index t) const {
  const NodeSet& fs = view.failed_;
  const auto k = static_cast<Index>(fs.size());
  double value = f_o_(s, t);
  if (k == 0) return value;
  // F_st - F_sF W^{-1} F_Ft
  for (Index a = 0; a < k; ++a) {
    const double left = f_o_(s, fs[static_cast<std::size_t>(a)]);
    if (left == 0.0) continue;
    double inner = 0.0;
    for (Index b = 0; b < k; ++b) inner += view.w_inv_(a, b) * f_o_(fs[static_cast<std::size_t>(b)], t);
    value -= left * inner;
  }
  return value;
}

bool ReachabilityOracle::query(const FailureView& view, Index s, Index t) const {
  check_index(s);
  check_index(t);
  if (view.is_failed(s) || view.is_failed(t)) {
    throw ValidationError("reachability", "query endpoint " + std::to_string(view.is_failed(s) ? s : t) +
                                              " is in the failure set");
  }
  if (s == t) return true;
  const double v = corrected_value(view, s, t);
  const bool hit = v > threshold_;
  record(v, hit);
  return hit;
}

bool ReachabilityOracle::query_with_failures(Index s, Index t, std::span<const Index> failed) const {
  if (failed.empty()) return query(s, t);
  return query(*failure_view(failed), s, t);
}

GapMonitor ReachabilityOracle::gap() const {
  return GapMonitor{max_unreachable_.load(), min_reachable_.load()};
}

ReachabilityOracle build_oracle(const ExtendedGraph& ext, const OracleOptions& options) {
  Matrix m = -ext.transient_block();
  m.diagonal().array() += 1.0;
  return ReachabilityOracle(linalg::inverse(m), options.relative_threshold);
}

ReachabilityOracle build_oracle(const Graph& g, const OracleOptions& options) {
  return build_oracle(extend_graph(g, options.beta), options);
}

}  // namespace rwnet
