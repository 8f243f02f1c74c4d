#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

namespace oracle {

namespace {

bool contains(const Nodes& set, std::size_t v) { return std::find(set.begin(), set.end(), v) != set.end(); }

Nodes complement(std::size_t n, const Nodes& set) {
  Nodes out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!contains(set, i)) out.push_back(i);
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

Dense identity(std::size_t n) {
  Dense out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
  return out;
}

Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t r = a.size();
  const std::size_t inner = b.size();
  const std::size_t c = inner == 0 ? 0 : b[0].size();
  Dense out(r, std::vector<double>(c, 0.0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

std::optional<Dense> gauss_jordan_inverse(const Dense& a) {
  const std::size_t n = a.size();
  Dense m = a;
  Dense inv = identity(n);
  std::vector<std::size_t> col_perm(n);
  for (std::size_t i = 0; i < n; ++i) col_perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        if (std::abs(m[i][j]) > best) {
          best = std::abs(m[i][j]);
          pr = i;
          pc = j;
        }
      }
    }
    if (best < 1e-14) return std::nullopt;
    std::swap(m[k], m[pr]);
    std::swap(inv[k], inv[pr]);
    if (pc != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m[i][k], m[i][pc]);
      std::swap(col_perm[k], col_perm[pc]);
    }
    const double piv = m[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      m[k][j] /= piv;
      inv[k][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0.0) continue;
      const double f = m[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  // Column swaps on the input permute the rows of its inverse.
  Dense out(n);
  for (std::size_t k = 0; k < n; ++k) out[col_perm[k]] = inv[k];
  return out;
}

Dense transition(const Dense& adjacency) {
  Dense p = adjacency;
  for (auto& row : p) {
    double d = 0.0;
    for (double x : row) d += x;
    if (d <= 0.0) throw std::invalid_argument("oracle::transition: zero out-degree");
    for (double& x : row) x /= d;
  }
  return p;
}

std::vector<double> stationary(const Dense& p) {
  const std::size_t n = p.size();
  Dense m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? 1.0 : 0.0) - p[j][i];
  }
  for (std::size_t j = 0; j < n; ++j) m[n - 1][j] = 1.0;
  const auto inv = gauss_jordan_inverse(m);
  if (!inv) throw std::runtime_error("oracle::stationary: reducible chain");
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = (*inv)[i][n - 1];
  return pi;
}

Dense fundamental_for_set(const Dense& p, const Nodes& targets) {
  const Nodes tr = complement(p.size(), targets);
  Dense m(tr.size(), std::vector<double>(tr.size(), 0.0));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t j = 0; j < tr.size(); ++j) m[i][j] = (i == j ? 1.0 : 0.0) - p[tr[i]][tr[j]];
  }
  auto inv = gauss_jordan_inverse(m);
  if (!inv) throw std::runtime_error("oracle::fundamental_for_set: singular I - P_TT");
  return *inv;
}

Dense per_target_fundamental(const Dense& p, std::size_t t) { return fundamental_for_set(p, Nodes{t}); }

Dense absorption(const Dense& p, const Nodes& targets) {
  const Nodes tr = complement(p.size(), targets);
  Nodes sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  Dense pta(tr.size(), std::vector<double>(sorted.size(), 0.0));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t j = 0; j < sorted.size(); ++j) pta[i][j] = p[tr[i]][sorted[j]];
  }
  return multiply(fundamental_for_set(p, sorted), pta);
}

Dense pairwise_hitting(const Dense& p) {
  const std::size_t n = p.size();
  Dense h(n, std::vector<double>(n, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    const Dense f = per_target_fundamental(p, t);
    const Nodes tr = complement(n, Nodes{t});
    for (std::size_t i = 0; i < tr.size(); ++i) {
      double sum = 0.0;
      for (double x : f[i]) sum += x;
      h[tr[i]][t] = sum;
    }
  }
  return h;
}

bool bfs_reachable(const Dense& adjacency, std::size_t s, std::size_t t, const Nodes& removed) {
  if (contains(removed, s) || contains(removed, t)) return false;
  if (s == t) return true;
  const std::size_t n = adjacency.size();
  std::vector<char> seen(n, 0);
  for (std::size_t r : removed) seen[r] = 1;
  std::deque<std::size_t> queue{s};
  seen[s] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w = 0; w < n; ++w) {
      if (adjacency[v][w] > 0.0 && !seen[w]) {
        if (w == t) return true;
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

std::vector<char> bfs_reachable_set(const Dense& adjacency, std::size_t s, const Nodes& removed) {
  const std::size_t n = adjacency.size();
  std::vector<char> out(n, 0);
  if (contains(removed, s)) return out;
  std::vector<char> blocked(n, 0);
  for (std::size_t r : removed) blocked[r] = 1;
  std::deque<std::size_t> queue{s};
  out[s] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w = 0; w < n; ++w) {
      if (adjacency[v][w] > 0.0 && !out[w] && !blocked[w]) {
        out[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return out;
}

bool on_all_simple_paths(const Dense& adjacency, std::size_t s, std::size_t m, std::size_t t) {
  const std::size_t n = adjacency.size();
  std::vector<char> on_path(n, 0);
  bool any_path = false;
  bool avoids_m = false;
  std::function<void(std::size_t, bool)> dfs = [&](std::size_t v, bool through_m) {
    if (avoids_m) return;
    if (v == t) {
      any_path = true;
      if (!through_m) avoids_m = true;
      return;
    }
    on_path[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (adjacency[v][w] > 0.0 && !on_path[w]) dfs(w, through_m || w == m);
    }
    on_path[v] = 0;
  };
  dfs(s, s == m);
  return any_path && !avoids_m;
}

std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> articulation_triples(const Dense& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || !bfs_reachable(adjacency, s, t)) continue;
      for (std::size_t m = 0; m < n; ++m) {
        if (m == s || m == t) continue;
        if (!bfs_reachable(adjacency, s, t, Nodes{m})) out.emplace_back(s, m, t);
      }
    }
  }
  return out;
}

Dense extended_transition(const Dense& adjacency, double beta) {
  const std::size_t n = adjacency.size();
  Dense p(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double d = beta;
    for (double x : adjacency[i]) d += x;
    for (std::size_t j = 0; j < n; ++j) p[i][j] = adjacency[i][j] / d;
    p[i][n] = beta / d;
  }
  p[n][n] = 1.0;
  return p;
}

double spread(const Dense& adjacency, double beta, const Nodes& seeds) {
  const std::size_t n = adjacency.size();
  Nodes targets = seeds;
  std::sort(targets.begin(), targets.end());
  targets.push_back(n);
  const Dense p = extended_transition(adjacency, beta);
  const Dense q = absorption(p, targets);
  double total = static_cast<double>(seeds.size());
  for (const auto& row : q) {
    for (std::size_t j = 0; j + 1 < row.size(); ++j) total += row[j];
  }
  return total;
}

SubsetBest best_subset_spread(const Dense& adjacency, double beta, std::size_t k) {
  const std::size_t n = adjacency.size();
  if (k == 0 || k > n) throw std::invalid_argument("oracle::best_subset_spread: bad k");
  if (binomial(n, k) > 1e4) throw std::invalid_argument("oracle::best_subset_spread: too many subsets");
  SubsetBest best;
  best.spread = -1.0;
  std::vector<char> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), 1);
  // prev_permutation over a k-ones mask walks subsets in lexicographic order.
  do {
    Nodes seeds;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) seeds.push_back(i);
    }
    const double s = spread(adjacency, beta, seeds);
    if (s > best.spread + 1e-12) best = {seeds, s};
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace oracle
