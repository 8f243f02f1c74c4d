#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwnet/graph.hpp"

namespace rwnet {

enum class MetricKind { Visits, HittingTime, HittingCost, Absorption };

struct SimulationEstimate {
  double mean = 0.0;
  double standard_error = 0.0;  // sample std / sqrt(num_walks)
  std::size_t num_walks = 0;
  MetricKind kind = MetricKind::Visits;
};

struct SimulationOptions {
  std::size_t num_walks = 100000;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000000;
  // Edge costs for the hitting-cost estimate; skipped when absent.
  std::optional<Matrix> cost;
};

/// Estimates from independent walks started at `start` and stopped on first
/// entry into `targets`. The start visit counts toward visits[start].
struct SimulationResult {
  Index start = 0;
  NodeSet targets;
  std::vector<SimulationEstimate> visits;      // per node; zero for targets
  SimulationEstimate hitting_time;
  std::optional<SimulationEstimate> hitting_cost;
  std::vector<SimulationEstimate> absorption;  // per target, in `targets` order
  std::size_t truncated = 0;                   // walks that hit max_steps
};

/// Deterministic for a given seed regardless of thread count: walk w draws
/// from its own generator seeded by a mix of the master seed and w.
/// Throws ValidationError on bad input (including uncovered recurrent classes)
/// and NumericalError when more than 0.1% of walks are truncated.
SimulationResult simulate_walks(const TransitionMatrix& tm, Index start, std::span<const Index> targets,
                                const SimulationOptions& options = {});

std::string_view to_string(MetricKind kind);

}  // namespace rwnet
