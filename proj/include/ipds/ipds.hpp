#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ipds/cgs.hpp"
#include "ipds/feasible.hpp"
#include "ipds/graph.hpp"
#include "ipds/metrics.hpp"
#include "ipds/model.hpp"
#include "ipds/stacked.hpp"

namespace ipds {

// Step-size and batch schedules for the accelerated primal-dual sliding loop,
// with the phase switch at Delta for strongly convex problems.
struct Schedule {
  int N = 0;
  double L_tilde = 0.0, mu = 0.0, norm_A = 0.0, R = 0.0, c_const = 0.0;
  double tau_global = 0.0;     // 2 sqrt(L/mu) when mu > 0
  double lambda_global = 0.0;  // tau / (1 + tau)
  int Delta = std::numeric_limits<int>::max();

  // Per outer iteration, 1-based: index 0 is unused.
  std::vector<double> tau, lambda, beta, p;
  std::vector<int> T;
  std::vector<std::uint64_t> c;

  double eta(int k, int t) const { return (p[k] + mu) * (t - 1) + p[k] * T[k]; }
  double q(int k, int t) const {
    (void)t;
    return L_tilde * T[k] / (4.0 * beta[k] * R * R);
  }
  double alpha(int k, int t) const {
    if (k >= 2 && t == 1) return beta[k - 1] * T[k] / (beta[k] * T[k - 1]);
    return 1.0;
  }
};

Schedule make_schedule(double L_tilde, double mu, double norm_A, int N, double R, double c_const);

enum class LoMode { scheduled, fixed };
LoMode lo_mode_from_string(const std::string& s);

struct LoPolicy {
  LoMode mode = LoMode::scheduled;
  double epsilon = 1e-2;    // target accuracy driving the scheduled caps
  double tol = 1e-6;        // fixed-mode Wolfe tolerance
  double sc_constant = 0.0; // strongly convex cap constant; 0 = derive from problem constants
};

struct LoDecision {
  double tol = 0.0;
  std::uint64_t cap = 1;
};

// Wolfe tolerance and LO-call cap for the subproblem at (k, t).
LoDecision lo_tolerance(const LoPolicy& policy, const Schedule& sched, int k, int t, double epsilon_target,
                        double diam);

// Default strongly convex cap constant, assembled from the problem constants.
double sc_cap_constant(const Schedule& sched, double diam);

enum class InnerMemory { literal, shifted };
InnerMemory inner_memory_from_string(const std::string& s);

struct IpdsConfig {
  int N = 50;
  double R = 0.0;        // <= 0: use diameter(set)
  double c_const = -1.0; // < 0: use sigma^2 / R^2
  LoPolicy lo;
  InnerMemory inner_memory = InnerMemory::literal;
  std::uint64_t seed = 1;
  int threads = 1;
  // Test hook, called after every inner sliding step.
  std::function<void(int k, int t, const StackedPoint& x)> on_inner_iterate;
};

struct IpdsState {
  StackedPoint x_prev;             // x_{k-1}
  StackedPoint x_prevprev;         // x_{k-2}
  StackedPoint x_hat_prev;         // inner average of iteration k-1
  StackedPoint x_hat_sample;       // extrapolated point the gradient is sampled at
  StackedPoint v;                  // sampled gradient v_k
  StackedPoint z;                  // dual variable
  StackedPoint x_inner_prev;       // x_k^{t-1}
  StackedPoint x_inner_prevprev;   // x_k^{t-2}
  StackedPoint x_inner_secondlast; // x_{k-1}^{T_{k-1}-1}, for shifted inner memory
  StackedPoint weighted_sum;       // sum of beta_k * x_hat_k
  double weight_total = 0.0;
  std::uint64_t cgs_cap_hits = 0;

  // Scratch (kept here so the inner loop never allocates).
  StackedPoint u_tilde, lap_out, c_lin, x_inner_next;
  std::vector<std::uint64_t> node_lo;
  std::vector<char> node_cap;
};

// Prepares all state from the (feasible) starting point.
void init_state(IpdsState& state, const StackedPoint& x0, int m, int d);

// Acceleration step and gradient sampling: one data-oracle access per call.
void outer_step(IpdsState& state, const Schedule& sched, int k, const ProblemSpec& problem, const IpdsConfig& config,
                OracleCounters& counters, ThreadPool* pool = nullptr);

// Resets the inner iterates for outer iteration k (run after outer_step).
void begin_inner_loop(IpdsState& state, int k, InnerMemory memory);

// One communication-sliding step: two Laplacian applications plus m
// independent CGS solves.
void inner_sliding_step(IpdsState& state, const Schedule& sched, int k, int t, const Graph& graph,
                        const ConstraintSet& set, const LoPolicy& policy, OracleCounters& counters,
                        ThreadPool* pool = nullptr);

struct RunResult {
  StackedPoint x;  // weighted-average output
  RunRecord record;
  OracleCounters counters;
  std::uint64_t cgs_cap_hits = 0;
};

RunResult run_ipds(const ProblemSpec& problem, const Graph& graph, const ConstraintSet& set, const IpdsConfig& config,
                   const ReferenceSolution& reference);

}  // namespace ipds
