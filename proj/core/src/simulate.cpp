#include "rwnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "rwnet/error.hpp"
#include "rwnet/parallel.hpp"

namespace rwnet {

namespace {

// Vose alias table for one row of P.
struct AliasRow {
  std::vector<Index> column;
  std::vector<double> prob;
  std::vector<Index> alias;
};

AliasRow build_alias(const Matrix& p, Index row) {
  AliasRow out;
  std::vector<double> weight;
  for (Index j = 0; j < p.cols(); ++j) {
    if (p(row, j) > 0.0) {
      out.column.push_back(j);
      weight.push_back(p(row, j));
    }
  }
  const std::size_t k = weight.size();
  out.prob.assign(k, 1.0);
  out.alias.resize(k);
  double total = 0.0;
  for (double w : weight) total += w;
  std::vector<double> scaled(k);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = weight[i] * static_cast<double>(k) / total;
    out.alias[i] = static_cast<Index>(i);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    out.prob[s] = scaled[s];
    out.alias[s] = static_cast<Index>(l);
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to round-off.
  for (std::size_t i : small) out.prob[i] = 1.0;
  for (std::size_t i : large) out.prob[i] = 1.0;
  return out;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Index step(const AliasRow& row, std::mt19937_64& rng) {
  const auto k = row.column.size();
  auto slot = static_cast<std::size_t>(unit(rng) * static_cast<double>(k));
  if (slot >= k) slot = k - 1;
  const std::size_t pick = unit(rng) < row.prob[slot] ? slot : static_cast<std::size_t>(row.alias[slot]);
  return row.column[pick];
}

SimulationEstimate estimate(double sum, double sum_sq, std::size_t count, MetricKind kind) {
  SimulationEstimate e;
  e.kind = kind;
  e.num_walks = count;
  const double nw = static_cast<double>(count);
  e.mean = sum / nw;
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - nw * e.mean * e.mean) / (nw - 1.0));
    e.standard_error = std::sqrt(var / nw);
  }
  return e;
}

struct WalkOutcome {
  std::uint64_t steps = 0;
  double cost = 0.0;
  Index absorbed = -1;  // position in targets, -1 when truncated
};

}  // namespace

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Visits: return "visits";
    case MetricKind::HittingTime: return "hitting_time";
    case MetricKind::HittingCost: return "hitting_cost";
    case MetricKind::Absorption: return "absorption";
  }
  return "unknown";
}

SimulationResult simulate_walks(const TransitionMatrix& tm, Index start, std::span<const Index> targets,
                                const SimulationOptions& options) {
  const Index n = tm.size();
  if (start < 0 || start >= n) throw ValidationError("simulate", "start node out of range");
  if (targets.empty()) throw ValidationError("simulate", "target set must be nonempty");
  for (Index t : targets) {
    if (t < 0 || t >= n) throw ValidationError("simulate", "target index out of range");
  }
  if (options.num_walks < 1000) throw ValidationError("simulate", "num_walks must be at least 1000");
  if (options.max_steps == 0) throw ValidationError("simulate", "max_steps must be positive");
  const NodeSet tset = make_node_set(targets);
  std::vector<char> is_target(static_cast<std::size_t>(n), 0);
  std::vector<Index> target_pos(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < tset.size(); ++i) {
    is_target[static_cast<std::size_t>(tset[i])] = 1;
    target_pos[static_cast<std::size_t>(tset[i])] = static_cast<Index>(i);
  }
  for (const NodeSet& cls : recurrent_classes(tm.p)) {
    const bool covered = std::any_of(cls.begin(), cls.end(), [&](Index v) { return is_target[static_cast<std::size_t>(v)]; });
    if (!covered) throw ValidationError("simulate", "target set misses a recurrent class; walks would not terminate");
  }
  if (options.cost && (options.cost->rows() != n || options.cost->cols() != n)) {
    throw ValidationError("simulate", "cost matrix size does not match the transition matrix");
  }

  std::vector<AliasRow> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!is_target[static_cast<std::size_t>(i)]) rows[static_cast<std::size_t>(i)] = build_alias(tm.p, i);
  }

  const std::size_t walks = options.num_walks;
  const auto nn = static_cast<std::size_t>(n);
  std::vector<WalkOutcome> outcome(walks);
  // Visit counts are integers, so per-chunk integer accumulation is exact
  // and independent of how walks are split across threads.
  std::mutex merge_mutex;
  std::vector<std::uint64_t> visit_sum(nn, 0), visit_sq(nn, 0);

  parallel_for(walks, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> local_sum(nn, 0), local_sq(nn, 0), count(nn, 0);
    std::vector<Index> touched;
    for (std::size_t w = begin; w < end; ++w) {
      std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(w) + 1)));
      WalkOutcome& out = outcome[w];
      Index cur = start;
      touched.clear();
      while (true) {
        if (is_target[static_cast<std::size_t>(cur)]) {
          out.absorbed = target_pos[static_cast<std::size_t>(cur)];
          break;
        }
        if (out.steps >= options.max_steps) break;
        if (count[static_cast<std::size_t>(cur)]++ == 0) touched.push_back(cur);
        const Index next = step(rows[static_cast<std::size_t>(cur)], rng);
        if (options.cost) out.cost += (*options.cost)(cur, next);
        cur = next;
        ++out.steps;
      }
      for (Index v : touched) {
        const std::uint64_t c = count[static_cast<std::size_t>(v)];
        if (out.absorbed >= 0) {
          local_sum[static_cast<std::size_t>(v)] += c;
          local_sq[static_cast<std::size_t>(v)] += c * c;
        }
        count[static_cast<std::size_t>(v)] = 0;
      }
    }
    std::lock_guard lock(merge_mutex);
    for (std::size_t i = 0; i < nn; ++i) {
      visit_sum[i] += local_sum[i];
      visit_sq[i] += local_sq[i];
    }
  });

  SimulationResult result;
  result.start = start;
  result.targets = tset;
  std::vector<std::uint64_t> absorbed(tset.size(), 0);
  double t_sum = 0.0, t_sq = 0.0, c_sum = 0.0, c_sq = 0.0;
  std::size_t done = 0;
  for (const WalkOutcome& out : outcome) {
    if (out.absorbed < 0) {
      ++result.truncated;
      continue;
    }
    ++done;
    ++absorbed[static_cast<std::size_t>(out.absorbed)];
    const auto s = static_cast<double>(out.steps);
    t_sum += s;
    t_sq += s * s;
    c_sum += out.cost;
    c_sq += out.cost * out.cost;
  }
  if (static_cast<double>(result.truncated) > 1e-3 * static_cast<double>(walks)) {
    throw NumericalError("simulate", std::to_string(result.truncated) + " of " + std::to_string(walks) +
                                         " walks exceeded max_steps (limit 0.1%); raise max_steps");
  }
  if (done == 0) throw NumericalError("simulate", "no walk reached the target set");

  for (std::size_t i = 0; i < nn; ++i) {
    result.visits.push_back(estimate(static_cast<double>(visit_sum[i]), static_cast<double>(visit_sq[i]), done,
                                     MetricKind::Visits));
  }
  result.hitting_time = estimate(t_sum, t_sq, done, MetricKind::HittingTime);
  if (options.cost) result.hitting_cost = estimate(c_sum, c_sq, done, MetricKind::HittingCost);
  for (std::uint64_t a : absorbed) {
    const auto x = static_cast<double>(a);
    result.absorption.push_back(estimate(x, x, done, MetricKind::Absorption));
  }
  return result;
}

}  // namespace rwnet
