#pragma once

#include <string>
#include <vector>

#include "rwnet/fundamental.hpp"

namespace rwnet {

// Expected step counts to reach the target set, one entry per transient node.
struct HittingTimes {
  NodeSet targets;
  std::vector<Index> transient;
  Vector h;
};

struct HittingCosts {
  NodeSet targets;
  std::vector<Index> transient;
  Vector lh;
  Vector r;  // expected outgoing cost per node (all nodes)
};

HittingTimes hitting_times(const FundamentalMatrix& f);

// r_s = sum_m p_sm w_sm.
Vector expected_outgoing_cost(const TransitionMatrix& tm, const Matrix& cost);

// lh = F r with r from the transition and cost matrices.
HittingCosts hitting_costs(const FundamentalMatrix& f, const TransitionMatrix& tm, const Matrix& cost);

struct CommuteMatrix {
  Matrix c;
};

// C_ij = H_i^{j} + H_j^{i} from a pairwise matrix with H(i, j) = H_i^{j}.
CommuteMatrix commute(const Matrix& pairwise_hitting);
// Same symmetrization applied to pairwise hitting costs.
CommuteMatrix commute_costs(const Matrix& pairwise_costs);

/// Kirchhoff index evaluated three ways: half the commute-time sum over |E|,
/// (n/|E|) trace(L+) with L = Pi (I - P), and the total tensor mass over |E|.
struct KirchhoffReport {
  double from_commute = 0.0;
  double from_laplacian = 0.0;
  double from_tensor = 0.0;
  double edge_count = 0.0;

  double value() const { return from_tensor; }
  double max_relative_disagreement() const;
};

/// Throws NumericalError when the routes disagree by more than `tolerance`
/// (relative). `edge_count` counts directed edge slots.
KirchhoffReport kirchhoff_index(const FundamentalTensor& f, const TransitionMatrix& tm, double edge_count,
                                double tolerance = 1e-6);

/// Pairwise metrics straight from L+ = pinv(Pi (I - P)).
///   hitting:       H_i^{j} = sum_m (L+_im - L+_jm) pi_m + L+_jj - L+_ij
///   commute:       C_ij = L+_ii + L+_jj - L+_ij - L+_ji
///   hitting cost:  U_ij = sum_m (L+_im - L+_jm + L+_jj - L+_ij) g_m,  g_m = r_m pi_m
///   commute cost:  U_ij + U_ji = C_ij * sum_m g_m
Matrix laplacian_hitting(const Matrix& lplus, const Vector& pi);
Matrix laplacian_commute(const Matrix& lplus);
Matrix laplacian_hitting_costs(const Matrix& lplus, const Vector& pi, const Vector& r);
Matrix laplacian_commute_costs(const Matrix& lplus, const Vector& pi, const Vector& r);

// ---------------------------------------------------------------------------
// Relation suite

enum class RelationKind { Equality, Inequality };

struct RelationResult {
  std::string name;
  std::string statement;
  RelationKind kind = RelationKind::Equality;
  bool applicable = true;
  double max_violation = 0.0;
  std::size_t checks = 0;
  bool passed = true;
};

struct RelationReport {
  std::vector<RelationResult> relations;
  bool reversible = false;

  bool all_passed() const;
};

struct RelationOptions {
  Index max_n = 12;
  double equality_tolerance = 1e-8;
  double inequality_slack = 1e-10;
};

/// Evaluates the identities and inequalities linking F, H, C, Q and L+ on
/// every applicable index tuple. The reversibility relations are evaluated
/// only when the chain satisfies detailed balance. O(n^4); refuses n > max_n.
RelationReport relation_suite(const TransitionMatrix& tm, const RelationOptions& options = {});

}  // namespace rwnet
