#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rwnet/graph.hpp"

namespace rwnet {

/// Greedy seed selection trace.
struct SeedSelection {
  std::vector<Index> seeds;           // selection order
  std::vector<double> marginal_gains;  // spread increase per pick
  std::vector<double> spread_curve;    // spread after each pick
  double spread = 0.0;
  // Adoption probability of every original node under the final seed set.
  Vector adoption;
};

/// Expected number of adopters when seeding S in G^o: |S| plus, for every
/// other node, the probability that its walk is absorbed by S before o.
/// Computed from absorption probabilities with target set S u {o}.
double spread(const ExtendedGraph& ext, std::span<const Index> seeds);

// Per-node adoption probabilities (1 on seeds).
Vector adoption_probabilities(const ExtendedGraph& ext, std::span<const Index> seeds);

/// argmax_t sum_s F^_{sto}; ties (within 1e-9 relative) go to the lowest index.
Index most_influential(const ExtendedGraph& ext);

/// Marginal-gain greedy. Picked nodes join o in the absorbing set; F is kept
/// current with rank-|S2| Schur updates so each round costs O(n^2).
SeedSelection c2greedy(const ExtendedGraph& ext, Index k);

enum class RankMethod { Degree, Closeness, PageRank, Random };

RankMethod parse_rank_method(std::string_view name);
std::string_view to_string(RankMethod method);

struct RankerOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
};

/// Top-k nodes by weighted in-degree, harmonic closeness toward the node
/// (hop distances), PageRank, or a seeded random sample.
std::vector<Index> baseline_rankers(const Graph& g, Index k, RankMethod method, const RankerOptions& options = {});

Vector pagerank(const Graph& g, double damping = 0.85, double tolerance = 1e-10);
// sum_{s != t} 1 / d(s, t) with d the hop distance from s to t.
Vector harmonic_closeness_in(const Graph& g);

// Top-k by score, ties within 1e-9 relative broken toward the lowest index.
std::vector<Index> top_k(const Vector& scores, Index k);

}  // namespace rwnet
