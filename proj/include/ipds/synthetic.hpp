#pragma once

#include <cstdint>

#include "ipds/model.hpp"

namespace ipds {

// Gaussian features (rows scaled to expected unit norm times feature_scale)
// with labels from a planted linear model plus logistic noise.
Dataset synth_logistic(int n, int d, std::uint64_t seed, double feature_scale = 1.0);

// Least-squares problem with a controlled per-node spectrum: every node's
// Gram matrix has top eigenvalue exactly l_max, so the smoothness constant is
// known a priori. Targets are consistent with a planted point of norm
// x_ref_scale, which places the unconstrained optimum at distance
// x_ref_scale from the origin. The partition is block-aligned with the
// generated rows.
ProblemSpec make_quadratic_problem(int m, int rows_per_node, int d, double l_max, double mu, double sigma,
                                   double x_ref_scale, std::uint64_t seed);

}  // namespace ipds
