#pragma once

#include <functional>
#include <vector>

#include "ipds/feasible.hpp"
#include "ipds/graph.hpp"
#include "ipds/ipds.hpp"
#include "ipds/metrics.hpp"
#include "ipds/model.hpp"

namespace ipds {

// Doubly stochastic gossip weights built from the topology.
struct GossipMatrix {
  int m = 0;
  std::vector<double> w;  // m x m, row-major

  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * m + j]; }

  // out row i = sum_j W_ij x row j
  void mix(const StackedPoint& x, StackedPoint& out) const;
};

// W_ij = 1 / (1 + max(deg i, deg j)) on edges; the diagonal absorbs the rest.
GossipMatrix metropolis_weights(const Graph& g);

// Consensus-based decentralized Frank-Wolfe with gradient tracking.
// Exact gradients only (sigma = 0 semantics); per iteration: one gossip round
// on the iterates, one on the tracked gradients, one full shard gradient per
// node, one LO call per node.
using DefwObserver = std::function<void(int t, const StackedPoint& x_bar, const StackedPoint& g_track)>;

RunResult run_defw(const ProblemSpec& problem, const Graph& graph, const ConstraintSet& set, int iters,
                   const ReferenceSolution& reference, ThreadPool* pool = nullptr,
                   const DefwObserver& observer = {});

// Centralized projected gradient on the consensus objective.
// step < 0 selects the 1/L default; the objective must be non-increasing.
RunResult run_projected_gradient(const ProblemSpec& problem, const ConstraintSet& set, int iters, double step,
                                 const ReferenceSolution& reference);

}  // namespace ipds
