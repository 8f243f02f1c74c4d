#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "rwnet/error.hpp"
#include "rwnet/metrics.hpp"

namespace rwnet {

bool RelationReport::all_passed() const {
  return std::all_of(relations.begin(), relations.end(), [](const RelationResult& r) { return r.passed; });
}

namespace {

// Every metric the relations mention, computed by direct per-target-set
// inversions (independent of the tensor/pseudo-inverse path except for L+).
class MetricTables {
 public:
  explicit MetricTables(const TransitionMatrix& tm) : n_(tm.size()) {
    pi_ = tm.stationary ? *tm.stationary : stationary_distribution(tm);
    lplus_ = linalg::pinv(digraph_laplacian(tm, pi_));
    single_.reserve(static_cast<std::size_t>(n_));
    for (Index j = 0; j < n_; ++j) {
      const Index t[] = {j};
      single_.push_back(fundamental_matrix(tm, t));
    }
    h_ = Matrix::Zero(n_, n_);
    for (Index j = 0; j < n_; ++j) {
      const Vector rows = single_[static_cast<std::size_t>(j)].f.rowwise().sum();
      const auto& tr = single_[static_cast<std::size_t>(j)].transient;
      for (std::size_t k = 0; k < tr.size(); ++k) h_(tr[k], j) = rows(static_cast<Index>(k));
    }
    c_ = h_ + h_.transpose();
    for (Index j = 0; j < n_; ++j) {
      for (Index k = j + 1; k < n_; ++k) {
        const Index t[] = {j, k};
        pair_.emplace(std::pair{j, k}, fundamental_matrix(tm, t));
        absorb_.emplace(std::pair{j, k}, absorption_probabilities(tm, t));
      }
    }
  }

  Index n() const { return n_; }
  double pi(Index i) const { return pi_(i); }
  const Vector& pi() const { return pi_; }
  double lplus(Index i, Index j) const { return lplus_(i, j); }

  // F^{t}_{sm} with the tensor's zero convention.
  double f(Index t, Index s, Index m) const { return single_[static_cast<std::size_t>(t)].at(s, m); }
  double f2(Index j, Index k, Index s, Index m) const { return pair_.at(std::minmax(j, k)).at(s, m); }
  double h(Index i, Index j) const { return h_(i, j); }
  double c(Index i, Index j) const { return c_(i, j); }
  // H_i^{{j,k}}.
  double h2(Index i, Index j, Index k) const {
    const auto& fm = pair_.at(std::minmax(j, k));
    auto pos = fm.position(i);
    return pos ? fm.f.row(*pos).sum() : 0.0;
  }
  // Q_i^{{m, not j}}: probability of reaching m before j.
  double q(Index i, Index m, Index j) const {
    if (i == m) return 1.0;
    if (i == j) return 0.0;
    return absorb_.at(std::minmax(m, j)).at(i, m);
  }
  const AbsorptionMatrix& absorption(Index j, Index k) const { return absorb_.at(std::minmax(j, k)); }

 private:
  Index n_;
  Vector pi_;
  Matrix lplus_;
  std::vector<FundamentalMatrix> single_;
  std::map<std::pair<Index, Index>, FundamentalMatrix> pair_;
  std::map<std::pair<Index, Index>, AbsorptionMatrix> absorb_;
  Matrix h_;
  Matrix c_;
};

class Recorder {
 public:
  Recorder(RelationResult& result, double tolerance) : result_(result), tolerance_(tolerance) {}

  void equal(double lhs, double rhs) {
    result_.max_violation = std::max(result_.max_violation, std::abs(lhs - rhs));
    ++result_.checks;
  }
  void at_least(double lhs, double rhs) {
    result_.max_violation = std::max(result_.max_violation, rhs - lhs);
    ++result_.checks;
  }
  void finish() { result_.passed = !result_.applicable || result_.max_violation <= tolerance_; }

 private:
  RelationResult& result_;
  double tolerance_;
};

bool detailed_balance(const TransitionMatrix& tm, const Vector& pi) {
  const Index n = tm.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(pi(i) * tm.p(i, j) - pi(j) * tm.p(j, i)) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

RelationReport relation_suite(const TransitionMatrix& tm, const RelationOptions& options) {
  const Index n = tm.size();
  if (n > options.max_n) {
    throw ValidationError("metrics", "relation suite is O(n^4); n = " + std::to_string(n) + " exceeds max_n = " +
                                         std::to_string(options.max_n));
  }
  if (n < 3) throw ValidationError("metrics", "relation suite needs at least 3 nodes");
  if (!strongly_connected(tm.p)) throw ValidationError("metrics", "relation suite needs a strongly connected graph");

  const MetricTables m(tm);
  RelationReport report;
  report.reversible = detailed_balance(tm, m.pi());

  auto add = [&](std::string name, std::string statement, RelationKind kind, bool applicable,
                 const std::function<void(Recorder&)>& body) {
    RelationResult result;
    result.name = std::move(name);
    result.statement = std::move(statement);
    result.kind = kind;
    result.applicable = applicable;
    Recorder rec(result, kind == RelationKind::Equality ? options.equality_tolerance : options.inequality_slack);
    if (applicable) body(rec);
    rec.finish();
    report.relations.push_back(std::move(result));
  };
  const auto eq = RelationKind::Equality;
  const auto ge = RelationKind::Inequality;

  add("1", "Q^A_ij = 1 - sum_{k in A, k != j} Q^A_ik", eq, true, [&](Recorder& r) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        const Matrix& q = m.absorption(j, k).q;
        for (Index i = 0; i < q.rows(); ++i) r.equal(q(i, 0), 1.0 - q(i, 1));
      }
    }
  });

  add("2.1", "F^{j}_ii = pi_i C_ij", eq, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i != j) r.equal(m.f(j, i, i), m.pi(i) * m.c(i, j));
      }
    }
  });

  add("2.2", "F^{j}_im/pi_m + F^{j}_mi/pi_i = C_ij + C_jm - C_im", eq, true, [&](Recorder& r) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) {
          if (i == j || k == j) continue;
          r.equal(m.f(j, i, k) / m.pi(k) + m.f(j, k, i) / m.pi(i), m.c(i, j) + m.c(j, k) - m.c(i, k));
        }
      }
    }
  });

  add("2.3", "F^{j}_im/pi_m + F^{m}_ij/pi_j = C_jm", eq, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          if (j == k) continue;
          r.equal(m.f(j, i, k) / m.pi(k) + m.f(k, i, j) / m.pi(j), m.c(j, k));
        }
      }
    }
  });

  add("2.4", "F^{j}_im + F^{i}_jm = pi_m C_ij", eq, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) r.equal(m.f(j, i, k) + m.f(i, j, k), m.pi(k) * m.c(i, j));
      }
    }
  });

  add("3.1", "H_i^{j} + H_j^{m} - H_i^{m} = F^{j}_im / pi_m", eq, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) r.equal(m.h(i, j) + m.h(j, k) - m.h(i, k), m.f(j, i, k) / m.pi(k));
      }
    }
  });

  add("3.2", "H_i^{j} + H_j^{m} - H_i^{m} = Q_i^{m,not j} C_mj", eq, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          if (k != j) r.equal(m.h(i, j) + m.h(j, k) - m.h(i, k), m.q(i, k, j) * m.c(k, j));
        }
      }
    }
  });

  add("4", "H_i^{j,k} = H_i^{k} - Q_i^{j,not k} H_j^{k} = H_i^{j} - Q_i^{k,not j} H_k^{j}", eq, true,
      [&](Recorder& r) {
        for (Index j = 0; j < n; ++j) {
          for (Index k = 0; k < n; ++k) {
            if (j == k) continue;
            for (Index i = 0; i < n; ++i) {
              if (i == j || i == k) continue;
              const double direct = m.h2(i, j, k);
              r.equal(direct, m.h(i, k) - m.q(i, j, k) * m.h(j, k));
              r.equal(direct, m.h(i, j) - m.q(i, k, j) * m.h(k, j));
            }
          }
        }
      });

  add("5.1", "H_i^{m} + H_m^{j} >= H_i^{j}", ge, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) r.at_least(m.h(i, k) + m.h(k, j), m.h(i, j));
      }
    }
  });

  add("5.2", "H_i^{j} >= H_i^{j,m}", ge, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
          if (j != k) r.at_least(m.h(i, j), m.h2(i, j, k));
        }
      }
    }
  });

  add("5.3", "H_i^{m} + H_m^{j,k} >= H_i^{j,k}", ge, true, [&](Recorder& r) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        for (Index i = 0; i < n; ++i) {
          for (Index mid = 0; mid < n; ++mid) r.at_least(m.h(i, mid) + m.h2(mid, j, k), m.h2(i, j, k));
        }
      }
    }
  });

  add("6.1", "F_im F_kk >= F_ik F_km", ge, true, [&](Recorder& r) {
    auto check = [&](const std::function<double(Index, Index)>& f) {
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) {
          for (Index mid = 0; mid < n; ++mid) r.at_least(f(i, mid) * f(k, k), f(i, k) * f(k, mid));
        }
      }
    };
    for (Index j = 0; j < n; ++j) {
      check([&](Index s, Index t) { return m.f(j, s, t); });
      for (Index k = j + 1; k < n; ++k) check([&](Index s, Index t) { return m.f2(j, k, s, t); });
    }
  });

  add("6.2", "F_kk >= F_ik", ge, true, [&](Recorder& r) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) {
          r.at_least(m.f(j, k, k), m.f(j, i, k));
          for (Index l = j + 1; l < n; ++l) r.at_least(m.f2(j, l, k, k), m.f2(j, l, i, k));
        }
      }
    }
  });

  add("7", "Q_i^{m,not j} >= Q_i^{k,not j} Q_k^{m,not j}", ge, true, [&](Recorder& r) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < n; ++k) {
          for (Index mid = 0; mid < n; ++mid) {
            if (i == j || k == j || mid == j) continue;
            r.at_least(m.q(i, mid, j), m.q(i, k, j) * m.q(k, mid, j));
          }
        }
      }
    }
  });

  add("8", "L+_im + L+_kk >= L+_ik + L+_km", ge, true, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        for (Index mid = 0; mid < n; ++mid) {
          r.at_least(m.lplus(i, mid) + m.lplus(k, k), m.lplus(i, k) + m.lplus(k, mid));
        }
      }
    }
  });

  add("9.1", "F^{S}_im / pi_m = F^{S}_mi / pi_i (reversible)", eq, report.reversible, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        for (Index j = 0; j < n; ++j) {
          r.equal(m.f(j, i, k) / m.pi(k), m.f(j, k, i) / m.pi(i));
          for (Index l = j + 1; l < n; ++l) r.equal(m.f2(j, l, i, k) / m.pi(k), m.f2(j, l, k, i) / m.pi(i));
        }
      }
    }
  });

  add("9.2", "Q_i^{m,not j} C_mj = Q_m^{i,not j} C_ij (reversible)", eq, report.reversible, [&](Recorder& r) {
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        for (Index j = 0; j < n; ++j) {
          if (i == j || k == j) continue;
          r.equal(m.q(i, k, j) * m.c(k, j), m.q(k, i, j) * m.c(i, j));
        }
      }
    }
  });

  add("9.3", "H_i^{m} + H_m^{j} + H_j^{i} = H_m^{i} + H_j^{m} + H_i^{j} (reversible)", eq, report.reversible,
      [&](Recorder& r) {
        for (Index i = 0; i < n; ++i) {
          for (Index k = 0; k < n; ++k) {
            for (Index j = 0; j < n; ++j) {
              r.equal(m.h(i, k) + m.h(k, j) + m.h(j, i), m.h(k, i) + m.h(j, k) + m.h(i, j));
            }
          }
        }
      });

  return report;
}

}  // namespace rwnet
