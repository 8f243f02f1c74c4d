#include "rwnet/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/QR>

#include "rwnet/error.hpp"

namespace rwnet {

NodeSet make_node_set(std::span<const Index> nodes) {
  NodeSet out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Graph::Graph(std::vector<std::string> ids, Matrix adjacency, std::optional<Matrix> cost, bool directed)
    : ids_(std::move(ids)), adjacency_(std::move(adjacency)), cost_(std::move(cost)), directed_(directed) {
  const Index n = adjacency_.rows();
  if (adjacency_.cols() != n) throw ValidationError("graph", "adjacency matrix must be square");
  if (static_cast<Index>(ids_.size()) != n) throw ValidationError("graph", "id list does not match node count");
  linalg::require_finite(adjacency_, "adjacency");
  if ((adjacency_.array() < 0.0).any()) throw ValidationError("graph", "adjacency has negative weights");
  if (cost_) {
    if (cost_->rows() != n || cost_->cols() != n) throw ValidationError("graph", "cost matrix shape mismatch");
    linalg::require_finite(*cost_, "cost");
    if ((cost_->array() < 0.0).any()) throw ValidationError("graph", "cost matrix has negative entries");
  }
  if (!directed_) {
    if ((adjacency_.array() != adjacency_.transpose().array()).any()) {
      throw ValidationError("graph", "undirected graph needs a symmetric adjacency matrix");
    }
    if (cost_ && (cost_->array() != cost_->transpose().array()).any()) {
      throw ValidationError("graph", "undirected graph needs a symmetric cost matrix");
    }
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<Index>(i)).second) {
      throw ValidationError("graph", "duplicate node id '" + ids_[i] + "'");
    }
  }
}

Graph Graph::from_adjacency(Matrix adjacency, bool directed, std::optional<Matrix> cost) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(adjacency.rows()));
  for (Index i = 0; i < adjacency.rows(); ++i) ids.push_back(std::to_string(i));
  return Graph(std::move(ids), std::move(adjacency), std::move(cost), directed);
}

std::optional<Index> Graph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Index Graph::require_index(std::string_view id) const {
  if (auto i = index_of(id)) return *i;
  throw ValidationError("graph", "unknown node id '" + std::string(id) + "'");
}

Matrix Graph::cost_or_unit() const {
  if (cost_) return *cost_;
  return (adjacency_.array() > 0.0).cast<double>().matrix();
}

Index Graph::edge_count() const { return static_cast<Index>((adjacency_.array() > 0.0).count()); }

std::vector<std::vector<Index>> Graph::out_neighbors() const {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(size()));
  for (Index i = 0; i < size(); ++i) {
    for (Index j = 0; j < size(); ++j) {
      if (adjacency_(i, j) > 0.0) out[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_number(std::string_view field, std::size_t line, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

std::string Graph::to_edge_list() const {
  const Index n = size();
  std::ostringstream out;
  out << "# " << n << " nodes, " << (directed_ ? "directed" : "undirected") << "\n";
  Matrix pending = adjacency_;
  if (!directed_) pending = pending.triangularView<Eigen::Upper>();

  auto emit = [&](Index i, Index j) {
    out << ids_[static_cast<std::size_t>(i)] << ' ' << ids_[static_cast<std::size_t>(j)] << ' '
        << format_double(adjacency_(i, j));
    if (cost_) out << ' ' << format_double((*cost_)(i, j));
    out << '\n';
    if (directed_) {
      pending(i, j) = 0.0;
    } else {
      pending(std::min(i, j), std::max(i, j)) = 0.0;
    }
  };
  auto pending_edge = [&](Index i, Index j) {
    return directed_ ? pending(i, j) > 0.0 : pending(std::min(i, j), std::max(i, j)) > 0.0;
  };

  // Emit one introducing edge per node first so that the first-seen order on
  // reload reproduces the current indexing.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index k = 0; k < n; ++k) {
    if (seen[static_cast<std::size_t>(k)]) continue;
    bool done = false;
    for (Index j = 0; j < k && !done; ++j) {
      if (!seen[static_cast<std::size_t>(j)]) continue;
      if (pending_edge(j, k)) {
        emit(j, k);
        done = true;
      } else if (pending_edge(k, j)) {
        emit(k, j);
        done = true;
      }
    }
    if (!done && pending_edge(k, k)) {
      emit(k, k);
      done = true;
    }
    if (!done && k + 1 < n && !seen[static_cast<std::size_t>(k + 1)] && pending_edge(k, k + 1)) {
      emit(k, k + 1);
      seen[static_cast<std::size_t>(k + 1)] = 1;
      done = true;
    }
    seen[static_cast<std::size_t>(k)] = 1;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (pending(i, j) > 0.0) emit(i, j);
    }
  }
  return out.str();
}

Graph load_graph(std::string_view text, const LoadOptions& options) {
  struct EdgeAccum {
    double weight = 0.0;
    double weighted_cost = 0.0;
    std::size_t first_line = 0;
  };
  std::vector<std::string> ids;
  std::unordered_map<std::string, Index> index;
  std::map<std::pair<Index, Index>, EdgeAccum> edges;
  std::vector<std::string> warnings;
  bool any_cost = false;

  auto intern = [&](std::string_view id) {
    auto [it, inserted] = index.emplace(std::string(id), static_cast<Index>(ids.size()));
    if (inserted) ids.emplace_back(id);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto fields = split_fields(line);
    if (fields.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 4) {
      throw ParseError(line_no, "expected 'src dst [weight [cost]]', got " + std::to_string(fields.size()) +
                                    " field(s)");
    }
    double weight = 1.0;
    double cost = 1.0;
    bool has_cost = false;
    if (options.weighted) {
      if (fields.size() >= 3) weight = parse_number(fields[2], line_no, "weight");
      if (fields.size() == 4) {
        cost = parse_number(fields[3], line_no, "cost");
        has_cost = true;
      }
      if (!(weight > 0.0)) {
        throw ValidationError("graph", "line " + std::to_string(line_no) + ": edge weight must be positive, got " +
                                           std::string(fields[2]));
      }
      if (cost < 0.0) {
        throw ValidationError("graph", "line " + std::to_string(line_no) + ": edge cost must be nonnegative");
      }
    }
    any_cost = any_cost || has_cost;
    Index src = intern(fields[0]);
    Index dst = intern(fields[1]);
    const std::pair<Index, Index> key = options.directed ? std::pair<Index, Index>{src, dst}
                                                         : std::pair<Index, Index>{std::min(src, dst), std::max(src, dst)};
    auto [it, inserted] = edges.try_emplace(key);
    if (inserted) {
      it->second.first_line = line_no;
    } else {
      warnings.push_back("line " + std::to_string(line_no) + ": duplicate edge " + std::string(fields[0]) + " " +
                         std::string(fields[1]) + " (first seen on line " + std::to_string(it->second.first_line) +
                         "); weights summed");
    }
    it->second.weight += weight;
    it->second.weighted_cost += weight * cost;
    if (end == text.size()) break;
  }

  const Index n = static_cast<Index>(ids.size());
  Matrix adjacency = Matrix::Zero(n, n);
  std::optional<Matrix> costs;
  if (any_cost) costs = Matrix::Zero(n, n);
  for (const auto& [key, acc] : edges) {
    const auto [i, j] = key;
    adjacency(i, j) = acc.weight;
    if (!options.directed) adjacency(j, i) = acc.weight;
    if (costs) {
      const double c = acc.weighted_cost / acc.weight;
      (*costs)(i, j) = c;
      if (!options.directed) (*costs)(j, i) = c;
    }
  }
  Graph g(std::move(ids), std::move(adjacency), std::move(costs), options.directed);
  for (auto& w : warnings) g.add_warning(std::move(w));
  return g;
}

Graph load_graph_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("graph", "cannot open edge list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str(), options);
}

TransitionMatrix transition_matrix(const Graph& g) {
  const Index n = g.size();
  TransitionMatrix tm;
  tm.degrees = g.adjacency().rowwise().sum();
  std::vector<std::string> dangling;
  for (Index i = 0; i < n; ++i) {
    if (!(tm.degrees(i) > 0.0)) dangling.push_back(g.id(i));
  }
  if (!dangling.empty()) {
    std::string msg = "node(s) with zero out-degree:";
    for (std::size_t k = 0; k < dangling.size() && k < 10; ++k) msg += " '" + dangling[k] + "'";
    if (dangling.size() > 10) msg += " ...";
    msg += "; extend the graph with an exogenous node instead";
    throw ValidationError("graph", msg);
  }
  tm.p = tm.degrees.cwiseInverse().asDiagonal() * g.adjacency();
  return tm;
}

Vector stationary_distribution(const TransitionMatrix& tm) {
  const Index n = tm.size();
  if (n == 0) throw ValidationError("graph", "stationary distribution of an empty chain");
  if (!strongly_connected(tm.p)) {
    throw ValidationError("graph",
                          "chain is not irreducible (graph not strongly connected); use target-set metrics instead");
  }
  Eigen::MatrixXd system(n + 1, n);
  system.topRows(n) = Eigen::MatrixXd::Identity(n, n) - tm.p.transpose();
  system.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Vector pi = system.colPivHouseholderQr().solve(rhs);
  const double residual = (system * pi - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10)) {
    throw NumericalError("graph", "stationary distribution residual " + std::to_string(residual) + " exceeds 1e-10");
  }
  return pi;
}

TransitionMatrix with_stationary(TransitionMatrix tm) {
  tm.stationary = stationary_distribution(tm);
  return tm;
}

std::vector<NodeSet> strongly_connected_components(const Matrix& weights) {
  // Iterative Tarjan.
  const Index n = weights.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (weights(i, j) > 0.0) adj[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  std::vector<NodeSet> components;
  Index counter = 0;
  struct Frame {
    Index node;
    std::size_t next;
  };
  for (Index root = 0; root < n; ++root) {
    if (order[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    order[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto v = static_cast<std::size_t>(f.node);
      if (f.next < adj[v].size()) {
        const Index w = adj[v][f.next++];
        const auto wu = static_cast<std::size_t>(w);
        if (order[wu] < 0) {
          order[wu] = low[wu] = counter++;
          stack.push_back(w);
          on_stack[wu] = 1;
          call.push_back({w, 0});
        } else if (on_stack[wu]) {
          low[v] = std::min(low[v], order[wu]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        NodeSet comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp.push_back(w);
        } while (w != f.node);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      const Index finished = f.node;
      call.pop_back();
      if (!call.empty()) {
        auto parent = static_cast<std::size_t>(call.back().node);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  return components;
}

bool strongly_connected(const Matrix& weights) {
  return weights.rows() > 0 && strongly_connected_components(weights).size() == 1;
}

bool strongly_connected(const Graph& g) { return strongly_connected(g.adjacency()); }

std::vector<NodeSet> recurrent_classes(const Matrix& weights) {
  const auto components = strongly_connected_components(weights);
  std::vector<Index> comp_of(static_cast<std::size_t>(weights.rows()));
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (Index v : components[c]) comp_of[static_cast<std::size_t>(v)] = static_cast<Index>(c);
  }
  std::vector<NodeSet> recurrent;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool closed = true;
    for (Index v : components[c]) {
      for (Index j = 0; j < weights.cols() && closed; ++j) {
        if (weights(v, j) > 0.0 && comp_of[static_cast<std::size_t>(j)] != static_cast<Index>(c)) closed = false;
      }
      if (!closed) break;
    }
    if (closed) recurrent.push_back(components[c]);
  }
  std::sort(recurrent.begin(), recurrent.end());
  return recurrent;
}

std::vector<NodeSet> recurrent_classes(const Graph& g) { return recurrent_classes(g.adjacency()); }

bool reachable(const Matrix& weights, Index s, Index t, std::span<const Index> removed) {
  const Index n = weights.rows();
  if (s < 0 || s >= n || t < 0 || t >= n) throw ValidationError("graph", "reachable: node index out of range");
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  for (Index r : removed) blocked[static_cast<std::size_t>(r)] = 1;
  if (blocked[static_cast<std::size_t>(s)] || blocked[static_cast<std::size_t>(t)]) return false;
  if (s == t) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Index> queue{s};
  seen[static_cast<std::size_t>(s)] = 1;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (Index w = 0; w < n; ++w) {
      const auto wu = static_cast<std::size_t>(w);
      if (weights(v, w) > 0.0 && !seen[wu] && !blocked[wu]) {
        if (w == t) return true;
        seen[wu] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

TransitionMatrix ExtendedGraph::transition() const {
  const Index n = base.size();
  TransitionMatrix tm;
  tm.p = Matrix::Zero(n + 1, n + 1);
  tm.degrees = Vector::Zero(n + 1);
  const Matrix& a = base.adjacency();
  for (Index i = 0; i < n; ++i) {
    const double d = a.row(i).sum() + beta;
    tm.degrees(i) = d;
    tm.p.row(i).head(n) = a.row(i) / d;
    tm.p(i, n) = beta / d;
  }
  tm.p(n, n) = 1.0;
  return tm;
}

Matrix ExtendedGraph::transient_block() const {
  const Index n = base.size();
  const Matrix& a = base.adjacency();
  Matrix block(n, n);
  for (Index i = 0; i < n; ++i) block.row(i) = a.row(i) / (a.row(i).sum() + beta);
  return block;
}

ExtendedGraph extend_graph(Graph g, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ValidationError("graph", "exogenous weight beta must be positive, got " + std::to_string(beta));
  }
  return ExtendedGraph{std::move(g), beta};
}

}  // namespace rwnet
