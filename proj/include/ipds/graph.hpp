#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ipds/stacked.hpp"

namespace ipds {

enum class Topology { path, star, complete, barbell, erdos_renyi };

Topology topology_from_string(const std::string& s);
std::string to_string(Topology t);

struct GraphParams {
  double p = 0.0;  // edge probability, erdos_renyi only
};

// Communication topology with its dense Laplacian. Immutable after
// construction; all query operations are pure.
struct Graph {
  Topology kind = Topology::path;
  int m = 0;
  std::vector<std::pair<int, int>> edges;   // undirected, i < j, sorted
  std::vector<double> laplacian;            // m x m, row-major
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

  double lap(int i, int j) const { return laplacian[static_cast<std::size_t>(i) * m + j]; }
};

Graph build_topology(Topology kind, int m, const GraphParams& params, std::uint64_t seed);

// y = (L (x) I_d) x, computed row-wise as y_i = deg(i) x_i - sum_{j ~ i} x_j.
// The Kronecker operator is never materialized. L is symmetric, so the same
// call serves A^T z.
void apply_constraint(const Graph& g, const StackedPoint& x, StackedPoint& out);
StackedPoint apply_constraint(const Graph& g, const StackedPoint& x);

// lambda_max(L) = ||L (x) I_d||, by power iteration with the all-ones null
// direction deflated every step.
double operator_norm(const Graph& g);

// lambda_2(L) / lambda_max(L), in (0, 1] for connected graphs.
double spectral_gap(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace ipds
