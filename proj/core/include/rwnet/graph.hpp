#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwnet/linalg.hpp"

namespace rwnet {

// Sorted, duplicate-free list of dense node indices.
using NodeSet = std::vector<Index>;

NodeSet make_node_set(std::span<const Index> nodes);

/// Weighted graph over dense indices 0..n-1 with external string ids.
///
/// Adjacency and costs are dense n x n matrices; a_ij > 0 iff edge i->j
/// exists. Undirected graphs store both directions. Immutable once built.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> ids, Matrix adjacency, std::optional<Matrix> cost, bool directed);

  // Ids default to "0".."n-1".
  static Graph from_adjacency(Matrix adjacency, bool directed, std::optional<Matrix> cost = std::nullopt);

  Index size() const { return adjacency_.rows(); }
  bool directed() const { return directed_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_.at(static_cast<std::size_t>(i)); }
  std::optional<Index> index_of(std::string_view id) const;
  // Throws ValidationError naming the unknown id.
  Index require_index(std::string_view id) const;

  const Matrix& adjacency() const { return adjacency_; }
  bool has_costs() const { return cost_.has_value(); }
  // Cost matrix; unit costs on every edge when none were supplied.
  Matrix cost_or_unit() const;
  const std::optional<Matrix>& cost() const { return cost_; }

  bool has_edge(Index i, Index j) const { return adjacency_(i, j) > 0.0; }
  double out_degree(Index i) const { return adjacency_.row(i).sum(); }
  // Number of directed edge slots, i.e. nonzero a_ij; an undirected edge counts twice.
  Index edge_count() const;
  std::vector<std::vector<Index>> out_neighbors() const;

  // Warnings recorded while loading (duplicate edges and the like).
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  // Edge-list text that load_graph() reads back to the same adjacency.
  std::string to_edge_list() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
  Matrix adjacency_;
  std::optional<Matrix> cost_;
  bool directed_ = true;
  std::vector<std::string> warnings_;
};

struct LoadOptions {
  bool directed = true;
  // When false, weight and cost columns are ignored and every edge has weight 1.
  bool weighted = false;
};

/// Parses whitespace-separated `src dst [weight [cost]]` lines; `#` starts a
/// comment. Nodes are indexed in first-seen order. Duplicate edges have their
/// weights summed (costs merged as the weight-averaged cost) and a warning is
/// recorded on the graph.
Graph load_graph(std::string_view text, const LoadOptions& options);
Graph load_graph_file(const std::filesystem::path& path, const LoadOptions& options);

struct TransitionMatrix {
  Matrix p;
  Vector degrees;
  std::optional<Vector> stationary;

  Index size() const { return p.rows(); }
};

// P = D^{-1} A. Throws ValidationError naming any node with zero out-degree.
TransitionMatrix transition_matrix(const Graph& g);

/// Solves pi'(I - P) = 0 with sum(pi) = 1 appended as an extra equation.
/// Throws ValidationError when the chain is not irreducible.
Vector stationary_distribution(const TransitionMatrix& tm);

// Copy of `tm` with its stationary field filled in.
TransitionMatrix with_stationary(TransitionMatrix tm);

// Strongly connected components of the support of a (directed) weight or
// transition matrix, in reverse topological order.
std::vector<NodeSet> strongly_connected_components(const Matrix& weights);
bool strongly_connected(const Graph& g);
bool strongly_connected(const Matrix& weights);
// SCCs with no edge leaving them.
std::vector<NodeSet> recurrent_classes(const Graph& g);
std::vector<NodeSet> recurrent_classes(const Matrix& weights);

// Breadth-first reachability on the support of `weights` with `removed` nodes deleted.
bool reachable(const Matrix& weights, Index s, Index t, std::span<const Index> removed = {});

/// G^o: every node i gains an edge i -> o of weight beta; o (index n) is absorbing.
struct ExtendedGraph {
  Graph base;
  double beta = 1.0;

  Index exo_index() const { return base.size(); }
  Index size() const { return base.size() + 1; }
  // (n+1) x (n+1): p_io = beta/(d_i+beta), p_ij = a_ij/(d_i+beta), p_oo = 1.
  TransitionMatrix transition() const;
  // Rows/columns of the original nodes only: substochastic with deficit beta/(d_i+beta).
  Matrix transient_block() const;
};

ExtendedGraph extend_graph(Graph g, double beta);

}  // namespace rwnet
