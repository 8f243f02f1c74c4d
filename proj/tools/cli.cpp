#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cstring>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "rwnet/centrality.hpp"
#include "rwnet/error.hpp"
#include "rwnet/fundamental.hpp"
#include "rwnet/graph.hpp"
#include "rwnet/influence.hpp"
#include "rwnet/metrics.hpp"
#include "rwnet/parallel.hpp"
#include "rwnet/reachability.hpp"
#include "rwnet/simulate.hpp"

namespace rwnet::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  std::string input;
  bool directed = true;
  bool weighted = false;
  double beta = 1.0;
  std::string format = "json";
  std::size_t threads = 0;
  std::uint64_t seed = 0;

  // tensor
  std::string route = "rw";
  std::string via = "svd";
  bool normalized = false;
  double zero_tol = 1e-12;
  std::string binary_out;
  // hitting / simulate
  std::vector<std::string> targets;
  // centrality / load
  std::string sorted_load_out;
  // articulation
  double eps = 1e-9;
  // influence
  Index k = 1;
  std::string method = "c2greedy";
  std::string curve_out;
  // reach
  std::vector<std::string> query;
  std::vector<std::string> failed;
  std::string batch;
  std::string dump_oracle;
  double oracle_beta = 0.01;
  double threshold = 1e-9;
  // simulate
  std::string start;
  std::size_t walks = 100000;
  std::size_t max_steps = 1000000;
  // relations
  Index max_n = 12;
};

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::filesystem::path output_path(const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("RWNET_OUTPUT_DIR"); dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  }
  return p;
}

std::ofstream open_output(const std::string& name, bool binary = false) {
  const auto path = output_path(name);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw ValidationError("cli", "cannot open output file " + path.string());
  return f;
}

std::string hint_for(const std::string& module) {
  static const std::map<std::string, std::string> hints{
      {"graph", "check the edge list (`src dst [weight [cost]]` per line) and directedness flags; metrics that need a "
                "stationary distribution require a strongly connected graph, otherwise use `hitting --targets`"},
      {"linalg", "the system is numerically singular; check for nodes that cannot reach the target set"},
      {"fundamental", "the target set must contain a node from every recurrent class"},
      {"metrics", "check edge costs and the edge-count convention (directed edge slots)"},
      {"centrality", "centrality needs a strongly connected graph"},
      {"influence", "k must lie in [1, n] and seeds must be existing nodes"},
      {"reachability", "failed nodes cannot be query endpoints"},
      {"simulate", "raise --max-steps or check that every walk can reach the targets"},
      {"cli", "run with --help for usage"},
  };
  const auto it = hints.find(module);
  return it == hints.end() ? "run with --help for usage" : it->second;
}

class Session {
 public:
  Session(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {
    if (cfg_.format != "json" && cfg_.format != "csv") throw ValidationError("cli", "--format must be json or csv");
    graph_ = load_graph_file(cfg_.input, LoadOptions{cfg_.directed, cfg_.weighted});
    for (const auto& w : graph_.warnings()) err_ << "warning: " << w << "\n";
  }

  bool json() const { return cfg_.format == "json"; }
  const Graph& graph() const { return graph_; }

  Json header(const std::string& command) const {
    Json j;
    j["command"] = command;
    j["nodes"] = graph_.ids();
    j["directed"] = graph_.directed();
    j["edge_count"] = graph_.edge_count();
    if (!graph_.warnings().empty()) j["warnings"] = graph_.warnings();
    return j;
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }
  std::ostream& out() { return out_; }

  Index node(const std::string& id) const { return graph_.require_index(id); }
  std::vector<Index> nodes(const std::vector<std::string>& ids) const {
    std::vector<Index> out;
    for (const auto& id : ids) out.push_back(node(id));
    return out;
  }
  const std::string& id(Index i) const { return graph_.id(i); }

  const TransitionMatrix& transition() {
    if (!tm_) tm_ = transition_matrix(graph_);
    return *tm_;
  }
  const TransitionMatrix& ergodic() {
    if (!tm_ || !tm_->stationary) tm_ = with_stationary(transition_matrix(graph_));
    return *tm_;
  }
  FundamentalTensor tensor(LaplacianRoute route = LaplacianRoute::RandomWalk, bool via_z = false) {
    const auto& tm = ergodic();
    if (via_z) return tensor_via_z(tm, *tm.stationary);
    return fundamental_tensor(tm, TensorOptions{route, 300});
  }

 private:
  const Config& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Graph graph_;
  std::optional<TransitionMatrix> tm_;
};

Json by_node(const Session& s, const Vector& v) {
  Json j = Json::object();
  for (Index i = 0; i < v.size(); ++i) j[s.id(i)] = v(i);
  return j;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------

void write_tensor_binary(const Session& s, const std::string& path, const std::vector<std::array<Index, 3>>& idx,
                         const std::vector<double>& values, bool normalized) {
  auto f = open_output(path, true);
  auto put = [&](auto v) {
    // Little-endian byte order regardless of host.
    using U = std::conditional_t<sizeof(v) == 8, std::uint64_t, std::uint32_t>;
    U bits;
    std::memcpy(&bits, &v, sizeof(v));
    for (std::size_t b = 0; b < sizeof(v); ++b) f.put(static_cast<char>((bits >> (8 * b)) & 0xFF));
  };
  f.write("RWFT", 4);
  put(std::uint32_t{1});
  put(std::uint32_t{normalized ? 1u : 0u});
  put(static_cast<std::uint64_t>(s.graph().size()));
  for (const auto& id : s.graph().ids()) {
    put(static_cast<std::uint32_t>(id.size()));
    f.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  put(static_cast<std::uint64_t>(values.size()));
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (Index x : idx[r]) put(static_cast<std::uint32_t>(x));
    put(values[r]);
  }
  if (!f) throw ValidationError("cli", "failed writing " + path);
}

int cmd_tensor(Session& s, const Config& cfg) {
  LaplacianRoute route;
  if (cfg.route == "rw") {
    route = LaplacianRoute::RandomWalk;
  } else if (cfg.route == "digraph") {
    route = LaplacianRoute::Digraph;
  } else {
    throw ValidationError("cli", "--route must be rw or digraph");
  }
  if (cfg.via != "svd" && cfg.via != "z") throw ValidationError("cli", "--via must be svd or z");
  const FundamentalTensor f = s.tensor(route, cfg.via == "z");
  const NormalizedTensor fhat(f);
  const Index n = f.size();
  std::vector<std::array<Index, 3>> idx;
  std::vector<double> values;
  for (Index t = 0; t < n; ++t) {
    for (Index src = 0; src < n; ++src) {
      for (Index m = 0; m < n; ++m) {
        if (src == t || m == t) continue;
        const double v = cfg.normalized ? fhat(src, m, t) : f(src, m, t);
        if (std::abs(v) <= cfg.zero_tol) continue;
        idx.push_back({src, m, t});
        values.push_back(v);
      }
    }
  }
  if (!cfg.binary_out.empty()) write_tensor_binary(s, cfg.binary_out, idx, values, cfg.normalized);
  if (s.json()) {
    Json j = s.header("tensor");
    j["route"] = cfg.route;
    j["via"] = cfg.via;
    j["normalized"] = cfg.normalized;
    Json slices = Json::object();
    for (Index t = 0; t < n; ++t) {
      Matrix sl(n, n);
      for (Index src = 0; src < n; ++src) {
        for (Index m = 0; m < n; ++m) {
          const double v = cfg.normalized ? fhat(src, m, t) : f(src, m, t);
          sl(src, m) = std::abs(v) <= cfg.zero_tol ? 0.0 : v;
        }
      }
      slices[s.id(t)] = matrix_json(sl);
    }
    j["slices"] = std::move(slices);
    j["entries"] = values.size();
    s.emit(j);
  } else {
    s.out() << "s,m,t," << (cfg.normalized ? "normalized" : "value") << "\n";
    for (std::size_t r = 0; r < values.size(); ++r) {
      s.out() << s.id(idx[r][0]) << "," << s.id(idx[r][1]) << "," << s.id(idx[r][2]) << "," << num(values[r]) << "\n";
    }
  }
  return kOk;
}

int cmd_hitting(Session& s, const Config& cfg) {
  const Matrix cost = s.graph().cost_or_unit();
  if (!cfg.targets.empty()) {
    const auto& tm = s.transition();
    const auto targets = s.nodes(cfg.targets);
    const auto f = fundamental_matrix(tm, targets);
    const auto h = hitting_times(f);
    const auto lh = hitting_costs(f, tm, cost);
    if (s.json()) {
      Json j = s.header("hitting");
      Json tj = Json::array();
      for (Index t : f.targets) tj.push_back(s.id(t));
      j["targets"] = tj;
      Json ht = Json::object(), hc = Json::object();
      for (std::size_t k = 0; k < f.transient.size(); ++k) {
        ht[s.id(f.transient[k])] = h.h(static_cast<Index>(k));
        hc[s.id(f.transient[k])] = lh.lh(static_cast<Index>(k));
      }
      j["hitting_time"] = ht;
      j["hitting_cost"] = hc;
      s.emit(j);
    } else {
      s.out() << "source,hitting_time,hitting_cost\n";
      for (std::size_t k = 0; k < f.transient.size(); ++k) {
        s.out() << s.id(f.transient[k]) << "," << num(h.h(static_cast<Index>(k))) << ","
                << num(lh.lh(static_cast<Index>(k))) << "\n";
      }
    }
    return kOk;
  }
  const auto f = s.tensor();
  const Matrix h = f.hitting_matrix();
  const Matrix u = f.weighted_hitting_matrix(expected_outgoing_cost(s.ergodic(), cost));
  if (s.json()) {
    Json j = s.header("hitting");
    j["layout"] = "row = source, column = target";
    j["hitting_time"] = matrix_json(h);
    j["hitting_cost"] = matrix_json(u);
    s.emit(j);
  } else {
    s.out() << "source,target,hitting_time,hitting_cost\n";
    for (Index a = 0; a < h.rows(); ++a) {
      for (Index b = 0; b < h.cols(); ++b) {
        if (a != b) s.out() << s.id(a) << "," << s.id(b) << "," << num(h(a, b)) << "," << num(u(a, b)) << "\n";
      }
    }
  }
  return kOk;
}

int cmd_commute(Session& s, const Config&) {
  const auto f = s.tensor();
  const Matrix c = commute(f.hitting_matrix()).c;
  const Matrix cc = commute_costs(f.weighted_hitting_matrix(expected_outgoing_cost(s.ergodic(), s.graph().cost_or_unit()))).c;
  const double edges = static_cast<double>(s.graph().edge_count());
  if (s.json()) {
    Json j = s.header("commute");
    j["commute_time"] = matrix_json(c);
    j["commute_cost"] = matrix_json(cc);
    j["resistance"] = matrix_json(c / edges);
    s.emit(j);
  } else {
    s.out() << "i,j,commute_time,commute_cost,resistance\n";
    for (Index a = 0; a < c.rows(); ++a) {
      for (Index b = a + 1; b < c.cols(); ++b) {
        s.out() << s.id(a) << "," << s.id(b) << "," << num(c(a, b)) << "," << num(cc(a, b)) << "," << num(c(a, b) / edges)
                << "\n";
      }
    }
  }
  return kOk;
}

int cmd_kirchhoff(Session& s, const Config&) {
  const auto f = s.tensor();
  const auto k = kirchhoff_index(f, s.ergodic(), static_cast<double>(s.graph().edge_count()));
  if (s.json()) {
    Json j = s.header("kirchhoff");
    j["kirchhoff_index"] = k.value();
    j["routes"] = Json{{"commute", k.from_commute}, {"laplacian", k.from_laplacian}, {"tensor", k.from_tensor}};
    j["max_relative_disagreement"] = k.max_relative_disagreement();
    j["edge_convention"] = "directed edge slots (nonzero a_ij); an undirected edge counts twice";
    s.emit(j);
  } else {
    s.out() << "route,value\ncommute," << num(k.from_commute) << "\nlaplacian," << num(k.from_laplacian)
            << "\ntensor," << num(k.from_tensor) << "\n";
  }
  return kOk;
}

void write_sorted_load(Session& s, const Vector& l, std::ostream& os) {
  os << "rank,node,load\n";
  const auto order = ascending_order(l);
  for (std::size_t r = 0; r < order.size(); ++r) os << r << "," << s.id(order[r]) << "," << num(l(order[r])) << "\n";
}

Json sorted_load_json(Session& s, const Vector& l) {
  Json arr = Json::array();
  for (Index i : ascending_order(l)) arr.push_back(Json{{"node", s.id(i)}, {"load", l(i)}});
  return arr;
}

int cmd_centrality(Session& s, const Config& cfg) {
  const auto f = s.tensor();
  const auto c = closeness(f);
  const Vector brw = betweenness_rw(f);
  const Vector bnw = betweenness_newman(f, s.ergodic());
  const Vector l = load(NormalizedTensor(f));
  if (!cfg.sorted_load_out.empty()) {
    auto os = open_output(cfg.sorted_load_out);
    write_sorted_load(s, l, os);
  }
  if (s.json()) {
    Json j = s.header("centrality");
    j["closeness_total_hitting"] = by_node(s, c.total_hitting);
    j["closeness"] = by_node(s, c.reciprocal);
    j["betweenness_rw"] = by_node(s, brw);
    j["betweenness_newman"] = by_node(s, bnw);
    j["load"] = by_node(s, l);
    j["sorted_load"] = sorted_load_json(s, l);
    s.emit(j);
  } else {
    s.out() << "node,closeness_total_hitting,closeness,betweenness_rw,betweenness_newman,load\n";
    for (Index i = 0; i < f.size(); ++i) {
      s.out() << s.id(i) << "," << num(c.total_hitting(i)) << "," << num(c.reciprocal(i)) << "," << num(brw(i)) << ","
              << num(bnw(i)) << "," << num(l(i)) << "\n";
    }
  }
  return kOk;
}

int cmd_load(Session& s, const Config& cfg) {
  const Vector l = load(NormalizedTensor(s.tensor()));
  if (!cfg.sorted_load_out.empty()) {
    auto os = open_output(cfg.sorted_load_out);
    write_sorted_load(s, l, os);
  }
  if (s.json()) {
    Json j = s.header("load");
    j["load"] = by_node(s, l);
    j["sorted_load"] = sorted_load_json(s, l);
    s.emit(j);
  } else {
    write_sorted_load(s, l, s.out());
  }
  return kOk;
}

int cmd_articulation(Session& s, const Config& cfg) {
  const auto report = articulation_points(NormalizedTensor(s.tensor()), s.graph().adjacency(), cfg.eps);
  if (s.json()) {
    Json j = s.header("articulation");
    j["eps"] = cfg.eps;
    Json recs = Json::array();
    for (const auto& r : report.records) {
      Json pairs = Json::array();
      for (const auto& p : r.pairs) pairs.push_back(Json{{"source", s.id(p.source)}, {"target", s.id(p.target)}, {"trivial", p.trivial}});
      recs.push_back(Json{{"node", s.id(r.node)}, {"count", r.count}, {"nontrivial", r.nontrivial}, {"pairs", pairs}});
    }
    j["records"] = recs;
    j["rejected_candidates"] = report.rejected;
    s.emit(j);
  } else {
    s.out() << "source,node,target,trivial\n";
    for (const auto& r : report.records) {
      for (const auto& p : r.pairs) {
        s.out() << s.id(p.source) << "," << s.id(r.node) << "," << s.id(p.target) << "," << (p.trivial ? 1 : 0) << "\n";
      }
    }
  }
  return kOk;
}

int cmd_influence(Session& s, const Config& cfg) {
  const ExtendedGraph ext = extend_graph(s.graph(), cfg.beta);
  SeedSelection sel;
  if (cfg.method == "c2greedy") {
    sel = c2greedy(ext, cfg.k);
  } else {
    RankerOptions ro;
    ro.seed = cfg.seed;
    sel.seeds = baseline_rankers(s.graph(), cfg.k, parse_rank_method(cfg.method), ro);
    double prev = 0.0;
    for (std::size_t i = 0; i < sel.seeds.size(); ++i) {
      const double sp = spread(ext, std::span<const Index>(sel.seeds.data(), i + 1));
      sel.spread_curve.push_back(sp);
      sel.marginal_gains.push_back(sp - prev);
      prev = sp;
    }
    sel.spread = prev;
    sel.adoption = adoption_probabilities(ext, sel.seeds);
  }
  if (!cfg.curve_out.empty()) {
    auto os = open_output(cfg.curve_out);
    os << "k,node,marginal_gain,spread\n";
    for (std::size_t i = 0; i < sel.seeds.size(); ++i) {
      os << i + 1 << "," << s.id(sel.seeds[i]) << "," << num(sel.marginal_gains[i]) << "," << num(sel.spread_curve[i]) << "\n";
    }
  }
  if (s.json()) {
    Json j = s.header("influence");
    j["method"] = cfg.method;
    j["k"] = cfg.k;
    j["beta"] = cfg.beta;
    if (cfg.method == "random") j["seed"] = cfg.seed;
    Json seeds = Json::array();
    for (Index v : sel.seeds) seeds.push_back(s.id(v));
    j["seeds"] = seeds;
    j["marginal_gains"] = sel.marginal_gains;
    j["spread_curve"] = sel.spread_curve;
    j["spread"] = sel.spread;
    j["adoption"] = by_node(s, sel.adoption);
    s.emit(j);
  } else {
    s.out() << "k,node,marginal_gain,spread\n";
    for (std::size_t i = 0; i < sel.seeds.size(); ++i) {
      s.out() << i + 1 << "," << s.id(sel.seeds[i]) << "," << num(sel.marginal_gains[i]) << "," << num(sel.spread_curve[i])
              << "\n";
    }
  }
  return kOk;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_reach(Session& s, const Config& cfg) {
  OracleOptions oo;
  oo.beta = cfg.oracle_beta;
  oo.relative_threshold = cfg.threshold;
  const ReachabilityOracle oracle = build_oracle(s.graph(), oo);
  if (!cfg.dump_oracle.empty()) {
    auto os = open_output(cfg.dump_oracle);
    os << "source";
    for (const auto& id : s.graph().ids()) os << "," << id;
    os << "\n";
    for (Index a = 0; a < oracle.size(); ++a) {
      os << s.id(a);
      for (Index b = 0; b < oracle.size(); ++b) os << "," << num(oracle.table()(a, b));
      os << "\n";
    }
  }
  struct Query {
    std::string s, t;
    std::vector<std::string> failed;
  };
  std::vector<Query> queries;
  if (!cfg.query.empty()) queries.push_back({cfg.query.at(0), cfg.query.at(1), cfg.failed});
  if (!cfg.batch.empty()) {
    std::ifstream in(cfg.batch);
    if (!in) throw ValidationError("cli", "cannot read batch file " + cfg.batch);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream fields(line);
      std::vector<std::string> tok;
      for (std::string t; fields >> t;) tok.push_back(t);
      if (tok.empty()) continue;
      if (tok.size() < 2 || tok.size() > 3) {
        throw ValidationError("cli", cfg.batch + " line " + std::to_string(line_no) + ": expected `s t [f1,f2,...]`");
      }
      queries.push_back({tok[0], tok[1], tok.size() == 3 ? split_ids(tok[2]) : std::vector<std::string>{}});
    }
  }
  if (queries.empty() && cfg.dump_oracle.empty()) throw ValidationError("cli", "reach needs --query, --batch or --dump-oracle");
  std::vector<int> answers;
  for (const auto& q : queries) {
    answers.push_back(oracle.query_with_failures(s.node(q.s), s.node(q.t), s.nodes(q.failed)) ? 1 : 0);
  }
  if (s.json()) {
    Json j = s.header("reach");
    j["threshold"] = oracle.threshold();
    Json res = Json::array();
    for (std::size_t i = 0; i < queries.size(); ++i) {
      res.push_back(Json{{"source", queries[i].s}, {"target", queries[i].t}, {"failed", queries[i].failed}, {"reachable", answers[i]}});
    }
    j["results"] = res;
    const auto gap = oracle.gap();
    j["gap"] = Json{{"max_unreachable", gap.max_unreachable}, {"min_reachable", gap.min_reachable}};
    s.emit(j);
  } else {
    for (int a : answers) s.out() << a << "\n";
  }
  return kOk;
}

Json estimate_json(const SimulationEstimate& e, double exact) {
  return Json{{"mean", e.mean},
              {"standard_error", e.standard_error},
              {"exact", exact},
              {"within_3se", std::abs(e.mean - exact) <= 3.0 * e.standard_error + 1e-9}};
}

int cmd_simulate(Session& s, const Config& cfg) {
  if (cfg.start.empty() || cfg.targets.empty()) throw ValidationError("cli", "simulate needs --start and --targets");
  const auto& tm = s.transition();
  const Index start = s.node(cfg.start);
  const auto targets = s.nodes(cfg.targets);
  SimulationOptions so;
  so.num_walks = cfg.walks;
  so.seed = cfg.seed;
  so.max_steps = cfg.max_steps;
  so.cost = s.graph().cost_or_unit();
  const auto r = simulate_walks(tm, start, targets, so);

  // Matrix forms for comparison.
  const auto f = fundamental_matrix(tm, targets);
  const auto q = absorption_probabilities(tm, targets);
  const auto lh = hitting_costs(f, tm, *so.cost);
  const auto pos = f.position(start);
  const double h_exact = pos ? f.f.row(*pos).sum() : 0.0;
  const double c_exact = pos ? lh.lh(*pos) : 0.0;

  if (s.json()) {
    Json j = s.header("simulate");
    j["start"] = cfg.start;
    Json tj = Json::array();
    for (Index t : r.targets) tj.push_back(s.id(t));
    j["targets"] = tj;
    j["walks"] = cfg.walks;
    j["seed"] = cfg.seed;
    j["truncated"] = r.truncated;
    Json visits = Json::object();
    for (Index m = 0; m < tm.size(); ++m) visits[s.id(m)] = estimate_json(r.visits[static_cast<std::size_t>(m)], f.at(start, m));
    j["visits"] = visits;
    j["hitting_time"] = estimate_json(r.hitting_time, h_exact);
    j["hitting_cost"] = estimate_json(*r.hitting_cost, c_exact);
    Json ab = Json::object();
    for (std::size_t a = 0; a < r.targets.size(); ++a) ab[s.id(r.targets[a])] = estimate_json(r.absorption[a], q.at(start, r.targets[a]));
    j["absorption"] = ab;
    s.emit(j);
  } else {
    s.out() << "metric,node,mean,standard_error,exact\n";
    auto row = [&](const char* metric, const std::string& node, const SimulationEstimate& e, double exact) {
      s.out() << metric << "," << node << "," << num(e.mean) << "," << num(e.standard_error) << "," << num(exact) << "\n";
    };
    for (Index m = 0; m < tm.size(); ++m) row("visits", s.id(m), r.visits[static_cast<std::size_t>(m)], f.at(start, m));
    row("hitting_time", cfg.start, r.hitting_time, h_exact);
    row("hitting_cost", cfg.start, *r.hitting_cost, c_exact);
    for (std::size_t a = 0; a < r.targets.size(); ++a) row("absorption", s.id(r.targets[a]), r.absorption[a], q.at(start, r.targets[a]));
  }
  return kOk;
}

int cmd_relations(Session& s, const Config& cfg) {
  RelationOptions ro;
  ro.max_n = cfg.max_n;
  const auto report = relation_suite(s.transition(), ro);
  if (s.json()) {
    Json j = s.header("relations");
    j["reversible"] = report.reversible;
    Json rel = Json::array();
    for (const auto& r : report.relations) {
      rel.push_back(Json{{"name", r.name},
                         {"statement", r.statement},
                         {"kind", r.kind == RelationKind::Equality ? "equality" : "inequality"},
                         {"applicable", r.applicable},
                         {"checks", r.checks},
                         {"max_violation", r.max_violation},
                         {"passed", r.passed}});
    }
    j["relations"] = rel;
    j["all_passed"] = report.all_passed();
    s.emit(j);
  } else {
    s.out() << "name,kind,applicable,checks,max_violation,passed\n";
    for (const auto& r : report.relations) {
      s.out() << r.name << "," << (r.kind == RelationKind::Equality ? "equality" : "inequality") << ","
              << (r.applicable ? 1 : 0) << "," << r.checks << "," << num(r.max_violation) << "," << (r.passed ? 1 : 0)
              << "\n";
    }
  }
  return report.all_passed() ? kOk : kNumericalError;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("-i,--input", cfg.input, "Edge-list file (`src dst [weight [cost]]` per line)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_flag("--directed,!--undirected", cfg.directed, "Treat edges as directed (default) or undirected");
  sub->add_flag("--weighted", cfg.weighted, "Read the weight and cost columns");
  sub->add_option("--format", cfg.format, "Output format (reach defaults to bare 0/1 lines)")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", cfg.threads, "Worker thread cap (0 = hardware concurrency)");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Random-walk network analytics from the Markov fundamental tensor", "rwnet"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough(false);

  using Handler = int (*)(Session&, const Config&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](const char* name, const char* desc, Handler h) {
    CLI::App* c = app.add_subcommand(name, desc);
    add_common(c, cfg);
    commands.emplace_back(c, h);
    return c;
  };

  auto* tensor = sub("tensor", "Fundamental tensor F_smt (CSV quadruples or JSON per-target slices)", cmd_tensor);
  tensor->add_option("--route", cfg.route, "Laplacian route: rw (pinv(I-P)) or digraph (pinv(Pi(I-P)))")
      ->check(CLI::IsMember({"rw", "digraph"}));
  tensor->add_option("--via", cfg.via, "Pseudo-inverse: svd or z (one regular inverse)")->check(CLI::IsMember({"svd", "z"}));
  tensor->add_flag("--normalized", cfg.normalized, "Emit F_smt / F_mmt instead of F_smt");
  tensor->add_option("--zero-tol", cfg.zero_tol, "Entries with |value| <= tol are omitted");
  tensor->add_option("--binary", cfg.binary_out, "Also write a binary dump to this file");

  auto* hitting = sub("hitting", "Hitting times and costs (pairwise, or to a target set)", cmd_hitting);
  hitting->add_option("--targets", cfg.targets, "Target set (comma separated ids)")->delimiter(',');

  sub("commute", "Commute times, commute costs and effective resistances", cmd_commute);
  sub("kirchhoff", "Kirchhoff index by three independent routes", cmd_kirchhoff);

  auto* centrality = sub("centrality", "Closeness, betweenness (two variants) and load", cmd_centrality);
  centrality->add_option("--sorted-load", cfg.sorted_load_out, "Write the ascending load distribution as CSV");

  auto* articulation = sub("articulation", "Articulation triples from the normalized tensor", cmd_articulation);
  articulation->add_option("--eps", cfg.eps, "Candidate threshold: flag F^ >= 1 - eps");

  auto* loadc = sub("load", "Load distribution (per node and sorted)", cmd_load);
  loadc->add_option("--sorted-load", cfg.sorted_load_out, "Write the ascending load distribution as CSV");

  auto* influence = sub("influence", "Seed selection under the exogenous-node absorption model", cmd_influence);
  influence->add_option("-k,--k", cfg.k, "Number of seeds")->required();
  influence->add_option("--method", cfg.method, "c2greedy, degree, closeness, pagerank or random")
      ->check(CLI::IsMember({"c2greedy", "degree", "closeness", "pagerank", "random"}));
  influence->add_option("--beta", cfg.beta, "Exogenous edge weight");
  influence->add_option("--seed", cfg.seed, "Seed for the random baseline");
  influence->add_option("--curve", cfg.curve_out, "Write spread-vs-k CSV to this file");

  auto* reach = sub("reach", "Reachability queries, optionally with failed nodes", cmd_reach);
  reach->add_option("--query", cfg.query, "Source and target ids")->expected(2);
  reach->add_option("--failed", cfg.failed, "Failed nodes (comma separated ids)")->delimiter(',');
  reach->add_option("--batch", cfg.batch, "File of `s t [f1,f2,...]` lines; prints one 0/1 per line")
      ->check(CLI::ExistingFile);
  reach->add_option("--dump-oracle", cfg.dump_oracle, "Write the oracle table F^o as CSV");
  reach->add_option("--oracle-beta", cfg.oracle_beta, "Exogenous weight used by the oracle");
  reach->add_option("--threshold", cfg.threshold, "Zero threshold relative to max(F^o)");

  auto* simulate = sub("simulate", "Monte-Carlo walks compared with the matrix forms", cmd_simulate);
  simulate->add_option("--start", cfg.start, "Start node id")->required();
  simulate->add_option("--targets", cfg.targets, "Target set (comma separated ids)")->delimiter(',')->required();
  simulate->add_option("--walks", cfg.walks, "Number of walks (>= 1000)");
  simulate->add_option("--seed", cfg.seed, "Master RNG seed");
  simulate->add_option("--max-steps", cfg.max_steps, "Per-walk step cap");

  auto* relations = sub("relations", "Check the identities and inequalities between F, H, C, Q and L+", cmd_relations);
  relations->add_option("--max-n", cfg.max_n, "Refuse graphs larger than this (the suite is O(n^4))");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    set_thread_count(cfg.threads);
    for (const auto& [c, handler] : commands) {
      if (c->parsed()) {
        // reach prints bare 0/1 lines unless JSON is requested explicitly.
        if (c == reach && reach->count("--format") == 0) cfg.format = "csv";
        Session session(cfg, out, err);
        return handler(session, cfg);
      }
    }
    throw ValidationError("cli", "no subcommand given");
  } catch (const ValidationError& e) {
    err << "error [" << e.module() << "]: " << e.what() << "\nhint: " << hint_for(e.module()) << "\n";
    return kValidationError;
  } catch (const Error& e) {
    err << "error [" << e.module() << "]: " << e.what() << "\nhint: " << hint_for(e.module()) << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace rwnet::cli
