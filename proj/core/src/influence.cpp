#include "rwnet/influence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "rwnet/error.hpp"
#include "rwnet/fundamental.hpp"

namespace rwnet {

namespace {

NodeSet checked_seeds(const ExtendedGraph& ext, std::span<const Index> seeds) {
  if (seeds.empty()) throw ValidationError("influence", "seed set must be nonempty");
  for (Index s : seeds) {
    if (s == ext.exo_index()) throw ValidationError("influence", "the exogenous node cannot be a seed");
    if (s < 0 || s >= ext.base.size()) {
      throw ValidationError("influence", "seed index " + std::to_string(s) + " out of range");
    }
  }
  return make_node_set(seeds);
}

FundamentalMatrix exogenous_fundamental(const ExtendedGraph& ext) {
  const Index o[] = {ext.exo_index()};
  return fundamental_matrix(ext.transition(), o);
}

bool near_or_above(double candidate, double best) {
  return candidate >= best - 1e-9 * std::max(1.0, std::abs(best));
}

}  // namespace

Vector adoption_probabilities(const ExtendedGraph& ext, std::span<const Index> seeds) {
  const NodeSet s = checked_seeds(ext, seeds);
  NodeSet targets = s;
  targets.push_back(ext.exo_index());
  const AbsorptionMatrix q = absorption_probabilities(ext.transition(), targets);
  Vector adoption = Vector::Zero(ext.base.size());
  for (Index seed : s) adoption(seed) = 1.0;
  // Seed columns are the first |S| columns since o has the largest index.
  const Index seed_cols = static_cast<Index>(s.size());
  for (std::size_t k = 0; k < q.transient.size(); ++k) {
    adoption(q.transient[k]) = q.q.row(static_cast<Index>(k)).head(seed_cols).sum();
  }
  return adoption;
}

double spread(const ExtendedGraph& ext, std::span<const Index> seeds) {
  return adoption_probabilities(ext, seeds).sum();
}

std::vector<Index> top_k(const Vector& scores, Index k) {
  const Index n = scores.size();
  if (k < 0 || k > n) throw ValidationError("influence", "k must lie in [0, n]");
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(k));
  for (Index round = 0; round < k; ++round) {
    double best = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<std::size_t>(i)]) best = std::max(best, scores(i));
    }
    for (Index i = 0; i < n; ++i) {
      if (!taken[static_cast<std::size_t>(i)] && near_or_above(scores(i), best)) {
        taken[static_cast<std::size_t>(i)] = 1;
        picked.push_back(i);
        break;
      }
    }
  }
  return picked;
}

Index most_influential(const ExtendedGraph& ext) {
  if (ext.base.size() == 0) throw ValidationError("influence", "empty graph");
  const FundamentalMatrix f = exogenous_fundamental(ext);
  // transient == original nodes in index order.
  const Vector scores = f.f.colwise().sum().transpose().cwiseQuotient(f.f.diagonal());
  return top_k(scores, 1).front();
}

SeedSelection c2greedy(const ExtendedGraph& ext, Index k) {
  const Index n = ext.base.size();
  if (k < 1 || k > n) {
    throw ValidationError("influence", "k must lie in [1, n] (n = " + std::to_string(n) + "), got " + std::to_string(k));
  }
  SeedSelection out;
  FundamentalMatrix f = exogenous_fundamental(ext);
  Vector adopt = Vector::Zero(n);

  for (Index round = 0; round < k; ++round) {
    // Gain of adding t: (1 - a_t) * sum_s F_st / F_tt, the probability mass
    // that newly reaches the seed set through t.
    const Vector colsum = f.f.colwise().sum().transpose();
    Vector gains(static_cast<Index>(f.transient.size()));
    for (std::size_t c = 0; c < f.transient.size(); ++c) {
      const auto ci = static_cast<Index>(c);
      gains(ci) = (1.0 - adopt(f.transient[c])) * colsum(ci) / f.f(ci, ci);
    }
    const Index col = top_k(gains, 1).front();
    const Index pick = f.transient[static_cast<std::size_t>(col)];
    const double miss = 1.0 - adopt(pick);
    const double diag = f.f(col, col);
    for (std::size_t r = 0; r < f.transient.size(); ++r) {
      const Index node = f.transient[r];
      adopt(node) += f.f(static_cast<Index>(r), col) / diag * miss;
    }
    adopt(pick) = 1.0;

    out.seeds.push_back(pick);
    out.marginal_gains.push_back(gains(col));
    out.spread_curve.push_back(adopt.sum());

    const Index add[] = {pick};
    f = incremental_fundamental(f, add);
  }
  out.spread = adopt.sum();
  out.adoption = std::move(adopt);
  return out;
}

RankMethod parse_rank_method(std::string_view name) {
  if (name == "degree") return RankMethod::Degree;
  if (name == "closeness") return RankMethod::Closeness;
  if (name == "pagerank") return RankMethod::PageRank;
  if (name == "random") return RankMethod::Random;
  throw ValidationError("influence", "unknown ranking method '" + std::string(name) +
                                         "' (expected degree, closeness, pagerank or random)");
}

std::string_view to_string(RankMethod method) {
  switch (method) {
    case RankMethod::Degree: return "degree";
    case RankMethod::Closeness: return "closeness";
    case RankMethod::PageRank: return "pagerank";
    case RankMethod::Random: return "random";
  }
  return "unknown";
}

Vector pagerank(const Graph& g, double damping, double tolerance) {
  const Index n = g.size();
  if (n == 0) return Vector(0);
  const Matrix& a = g.adjacency();
  const Vector out_deg = a.rowwise().sum();
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < 100000; ++iter) {
    double dangling = 0.0;
    Vector next = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (out_deg(i) > 0.0) {
        next.noalias() += (damping * x(i) / out_deg(i)) * a.row(i).transpose();
      } else {
        dangling += x(i);
      }
    }
    next.array() += (1.0 - damping + damping * dangling) / static_cast<double>(n);
    const double delta = (next - x).lpNorm<1>();
    x = std::move(next);
    if (delta < tolerance) break;
  }
  return x;
}

Vector harmonic_closeness_in(const Graph& g) {
  const Index n = g.size();
  const auto adj = g.out_neighbors();
  Vector score = Vector::Zero(n);
  std::vector<Index> dist(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    std::deque<Index> queue{s};
    while (!queue.empty()) {
      const Index v = queue.front();
      queue.pop_front();
      for (Index w : adj[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          score(w) += 1.0 / static_cast<double>(dist[static_cast<std::size_t>(w)]);
          queue.push_back(w);
        }
      }
    }
  }
  return score;
}

std::vector<Index> baseline_rankers(const Graph& g, Index k, RankMethod method, const RankerOptions& options) {
  const Index n = g.size();
  if (k < 1 || k > n) throw ValidationError("influence", "k must lie in [1, n]");
  switch (method) {
    case RankMethod::Degree:
      return top_k(g.adjacency().colwise().sum().transpose(), k);
    case RankMethod::Closeness:
      return top_k(harmonic_closeness_in(g), k);
    case RankMethod::PageRank:
      return top_k(pagerank(g, options.damping, options.tolerance), k);
    case RankMethod::Random: {
      std::vector<Index> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), Index{0});
      std::mt19937_64 rng(options.seed);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(static_cast<std::size_t>(k));
      return order;
    }
  }
  throw ValidationError("influence", "unknown ranking method");
}

}  // namespace rwnet
