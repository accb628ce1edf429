#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ipds/feasible.hpp"

namespace ipds {

// Conditional gradient steps for min over X of
//   phi(x) = <g, x> + (beta/2) ||x - u||^2,
// terminating on the Wolfe-gap certificate.

struct WolfeGapResult {
  double gap = 0.0;
  std::vector<double> direction;  // v_t, the LO minimizer at the query point
};

// One certificate evaluation: phi'(u_t) = g + beta (u_t - u),
// v_t = lo_oracle(phi'), gap = <phi'(u_t), u_t - v_t>. Costs one LO call.
WolfeGapResult wolfe_gap(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                         std::span<const double> u_t);

struct CgsResult {
  std::vector<double> point;
  std::uint64_t lo_calls = 0;
  double final_gap = 0.0;
  bool hit_cap = false;  // iteration cap reached before the gap tolerance
};

// Test instrumentation: per-evaluation objective values and iterates.
struct CgsTrace {
  std::vector<double> phi;
  std::vector<std::vector<double>> iterates;
};

// Runs conditional gradient steps from u (or from lo_oracle(g) when u is
// infeasible) until the Wolfe gap is <= tol or max_iter steps were taken.
// Exact line search clipped at 1. lo_calls counts gap evaluations exactly.
CgsResult cgs_solve(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                    double tol, std::uint64_t max_iter, CgsTrace* trace = nullptr);

// In-place variant used by the solver hot loop; writes the solution into out.
void cgs_solve_into(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                    double tol, std::uint64_t max_iter, std::span<double> out, std::uint64_t& lo_calls,
                    double& final_gap, bool& hit_cap);

// Maps the sliding subproblem
//   min mu nu(x) + <c, x> + eta V(x_prev, x) + (p/2) ||x_anchor - x||^2
// with nu = ||.||^2/2 and V(a,b) = ||b-a||^2/2 onto the (g, u, beta) form;
// the two objectives differ by a constant.
struct Subproblem {
  std::vector<double> g;
  std::vector<double> u;
  double beta = 0.0;
};

Subproblem reduce_subproblem(std::span<const double> c, std::span<const double> x_prev,
                             std::span<const double> x_anchor, double mu, double eta, double p);

}  // namespace ipds
