#pragma once

#include <vector>

#include "rwnet/fundamental.hpp"

namespace rwnet {

struct Closeness {
  Vector total_hitting;  // sum_{s,m} F_smt for target t
  Vector reciprocal;     // n / total_hitting
};

Closeness closeness(const FundamentalTensor& f);

// sum_{s,t} F_smt for every medial node m; proportional to pi_m.
Vector betweenness_rw(const FundamentalTensor& f);

/// Net-flow betweenness: sum_{s,t} sum_k 1/2 |F_smt p_mk - F_skt p_km|.
/// Reduces to betweenness_rw on strictly unidirectional graphs.
Vector betweenness_newman(const FundamentalTensor& f, const TransitionMatrix& tm);

// Load(m) = sum_{s,t} F^_smt / (n-1)^2, in [0, 1].
Vector load(const NormalizedTensor& fhat);

// Node indices ordered by increasing value (ties by index).
std::vector<Index> ascending_order(const Vector& values);

struct ArticulationPair {
  Index source;
  Index target;
  // m == source: counted by convention, not a cut vertex in the graph sense.
  bool trivial;
};

struct ArticulationRecord {
  Index node;
  std::vector<ArticulationPair> pairs;
  std::size_t count = 0;          // all flagged pairs
  std::size_t nontrivial = 0;     // pairs with m != s
};

struct ArticulationReport {
  std::vector<ArticulationRecord> records;  // one per node that is flagged at least once
  // Candidates with F^ >= 1 - eps that failed graph-search re-verification.
  std::size_t rejected = 0;
};

/// Flags every (s, m, t) with F^_smt >= 1 - eps. Nontrivial candidates are
/// re-verified against a breadth-first search on `adjacency` with m deleted
/// (t must become unreachable from s); failures are dropped and counted.
ArticulationReport articulation_points(const NormalizedTensor& fhat, const Matrix& adjacency, double eps = 1e-9);

}  // namespace rwnet
