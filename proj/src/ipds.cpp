#include "ipds/ipds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ipds/errors.hpp"

namespace ipds {

Schedule make_schedule(double L_tilde, double mu, double norm_A, int N, double R, double c_const) {
  if (!(L_tilde > 0.0) || !std::isfinite(L_tilde)) throw ConfigError("make_schedule: L_tilde must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("make_schedule: mu must be >= 0");
  if (!(norm_A > 0.0) || !std::isfinite(norm_A)) throw ConfigError("make_schedule: operator norm must be positive");
  if (N < 1) throw ConfigError("make_schedule: N must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("make_schedule: R must be positive");
  if (!(c_const >= 0.0) || !std::isfinite(c_const)) throw ConfigError("make_schedule: c must be >= 0");

  Schedule s;
  s.N = N;
  s.L_tilde = L_tilde;
  s.mu = mu;
  s.norm_A = norm_A;
  s.R = R;
  s.c_const = c_const;
  if (mu > 0.0) {
    s.tau_global = 2.0 * std::sqrt(L_tilde / mu);
    s.lambda_global = s.tau_global / (1.0 + s.tau_global);
    s.Delta = static_cast<int>(std::ceil(2.0 * s.tau_global + 1.0));
  }

  s.tau.assign(N + 1, 0.0);
  s.lambda.assign(N + 1, 0.0);
  s.beta.assign(N + 1, 0.0);
  s.p.assign(N + 1, 0.0);
  s.T.assign(N + 1, 0);
  s.c.assign(N + 1, 1);

  const double delta_cap = std::min(static_cast<double>(N), static_cast<double>(s.Delta));
  for (int k = 1; k <= N; ++k) {
    double Tk, ck;
    if (k <= s.Delta) {
      s.tau[k] = (k - 1) / 2.0;
      s.lambda[k] = static_cast<double>(k - 1) / k;
      s.beta[k] = k;
      s.p[k] = 4.0 * L_tilde / k;
      Tk = std::ceil(k * R * norm_A / L_tilde);
      ck = std::ceil(delta_cap * s.beta[k] * c_const / (s.p[k] * L_tilde));
    } else {
      const double tau = s.tau_global, lambda = s.lambda_global;
      s.tau[k] = tau;
      s.lambda[k] = lambda;
      s.beta[k] = s.Delta * std::pow(lambda, -static_cast<double>(k - s.Delta));
      s.p[k] = 2.0 * L_tilde / (1.0 + tau);
      Tk = std::ceil(2.0 * (1.0 + tau) * R * norm_A / (L_tilde * std::pow(lambda, (k - s.Delta) / 2.0)));
      ck = std::ceil((1.0 + tau) * (1.0 + tau) * s.Delta * c_const /
                     (L_tilde * L_tilde * std::pow(lambda, (k + N - 2.0 * s.Delta) / 2.0)));
    }
    if (!std::isfinite(Tk) || Tk > 1e9) throw ConfigError("make_schedule: T_k overflows at k=" + std::to_string(k));
    if (!std::isfinite(ck)) throw ConfigError("make_schedule: c_k overflows at k=" + std::to_string(k));
    s.T[k] = std::max(1, static_cast<int>(Tk));
    s.c[k] = static_cast<std::uint64_t>(std::max(1.0, ck));
  }
  return s;
}

LoMode lo_mode_from_string(const std::string& str) {
  if (str == "scheduled") return LoMode::scheduled;
  if (str == "fixed") return LoMode::fixed;
  throw ConfigError("unknown lo_policy mode: " + str);
}

InnerMemory inner_memory_from_string(const std::string& str) {
  if (str == "literal") return InnerMemory::literal;
  if (str == "shifted") return InnerMemory::shifted;
  throw ConfigError("unknown inner_memory: " + str);
}

double sc_cap_constant(const Schedule& sched, double diam) {
  const double L = sched.L_tilde, mu = sched.mu, tau = sched.tau_global, lambda = sched.lambda_global;
  const double delta = sched.Delta, normA = sched.norm_A, R = sched.R;
  const double log_inv_lambda = std::log(1.0 / lambda);
  const double reach = delta - 1.0 + 2.0 / log_inv_lambda;
  const double c_prime = (2.0 * L / ((1.0 + tau) * delta)) * reach * reach +
                         (4.0 * R * normA / ((1.0 - std::sqrt(lambda)) * delta)) * reach;
  const double inner = (L / (1.0 + tau) + mu) * 2.0 * (1.0 + tau) * (1.0 + tau) * R * R * normA * normA /
                           (delta * L * L) +
                       c_prime;
  return 12.0 * diam * diam / std::sqrt(inner);
}

LoDecision lo_tolerance(const LoPolicy& policy, const Schedule& sched, int k, int t, double epsilon_target,
                        double diam) {
  LoDecision d;
  const double eta_p = sched.eta(k, t) + sched.p[k];
  if (policy.mode == LoMode::fixed) {
    if (!(policy.tol > 0.0)) throw ConfigError("lo_tolerance: fixed mode needs tol > 0");
    d.tol = policy.tol;
    double beta_sub = sched.mu + eta_p;
    double cap = 10.0 * std::floor(12.0 * beta_sub * diam * diam / policy.tol);
    d.cap = cap > 1e18 ? static_cast<std::uint64_t>(1e18) : static_cast<std::uint64_t>(std::max(1.0, cap));
    return d;
  }
  if (!(epsilon_target > 0.0)) throw ConfigError("lo_tolerance: epsilon_target must be > 0");
  d.tol = epsilon_target / 2.0;
  double cap;
  if (sched.mu > 0.0) {
    double C = policy.sc_constant > 0.0 ? policy.sc_constant : sc_cap_constant(sched, diam);
    cap = std::floor(C / epsilon_target * std::sqrt(sched.beta[k] * eta_p / sched.T[k]));
  } else {
    cap = std::floor(24.0 * eta_p * diam * diam / epsilon_target);
  }
  if (!std::isfinite(cap)) cap = 1e18;
  d.cap = cap > 1e18 ? static_cast<std::uint64_t>(1e18) : static_cast<std::uint64_t>(std::max(1.0, cap));
  return d;
}

void init_state(IpdsState& state, const StackedPoint& x0, int m, int d) {
  require_shape(x0, m, d, "init_state x0");
  state.x_prev = x0;
  state.x_prevprev = x0;
  state.x_hat_prev = x0;
  state.x_hat_sample = StackedPoint(m, d);
  state.v = StackedPoint(m, d);
  state.z = StackedPoint(m, d);
  state.x_inner_prev = x0;
  state.x_inner_prevprev = x0;
  state.x_inner_secondlast = x0;
  state.weighted_sum = StackedPoint(m, d);
  state.weight_total = 0.0;
  state.cgs_cap_hits = 0;
  state.u_tilde = StackedPoint(m, d);
  state.lap_out = StackedPoint(m, d);
  state.c_lin = StackedPoint(m, d);
  state.x_inner_next = StackedPoint(m, d);
  state.node_lo.assign(m, 0);
  state.node_cap.assign(m, 0);
}

void outer_step(IpdsState& state, const Schedule& sched, int k, const ProblemSpec& problem, const IpdsConfig& config,
                OracleCounters& counters, ThreadPool* pool) {
  const int m = state.x_prev.rows, d = state.x_prev.cols;
  const double lam = sched.lambda[k], tau = sched.tau[k];
  // x_tilde = x_{k-1} + lambda_k (xhat_{k-1} - x_{k-2}); sample point
  // xhat_k = (x_tilde + tau_k xhat_{k-1}) / (1 + tau_k)
  for (int i = 0; i < m; ++i) {
    auto xp = state.x_prev.row(i);
    auto xpp = state.x_prevprev.row(i);
    auto xh = state.x_hat_prev.row(i);
    auto out = state.x_hat_sample.row(i);
    for (int j = 0; j < d; ++j) {
      double x_tilde = xp[j] + lam * (xh[j] - xpp[j]);
      out[j] = (x_tilde + tau * xh[j]) / (1.0 + tau);
    }
  }
  if (problem.sigma > 0.0) {
    if (sched.c[k] > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw ConfigError("outer_step: batch size c_k exceeds int range");
    stochastic_gradient(problem, state.x_hat_sample, static_cast<int>(sched.c[k]), config.seed, k, state.v, counters,
                        pool);
  } else {
    full_gradient(problem, state.x_hat_sample, state.v, counters, pool);
  }
}

void begin_inner_loop(IpdsState& state, int k, InnerMemory memory) {
  // x_k^0 = x_{k-1}; x_k^{-1} = x_{k-1}^{T_{k-1}} (literal) which equals
  // x_{k-1}, or the second-to-last inner iterate in shifted mode.
  state.x_inner_prev = state.x_prev;
  if (k == 1 || memory == InnerMemory::literal)
    state.x_inner_prevprev = state.x_prev;
  else
    state.x_inner_prevprev = state.x_inner_secondlast;
}

void inner_sliding_step(IpdsState& state, const Schedule& sched, int k, int t, const Graph& graph,
                        const ConstraintSet& set, const LoPolicy& policy, OracleCounters& counters,
                        ThreadPool* pool) {
  const int m = state.x_prev.rows, d = state.x_prev.cols;
  const double alpha = sched.alpha(k, t);
  const double q = sched.q(k, t);
  const double eta = sched.eta(k, t);
  const double p_k = sched.p[k];

  // u_tilde = x_k^{t-1} + alpha (x_k^{t-1} - x_k^{t-2})
  for (int i = 0; i < m; ++i) {
    auto a = state.x_inner_prev.row(i);
    auto b = state.x_inner_prevprev.row(i);
    auto out = state.u_tilde.row(i);
    for (int j = 0; j < d; ++j) out[j] = a[j] + alpha * (a[j] - b[j]);
  }

  // Dual ascent: z += A u_tilde / q (one communication round).
  apply_constraint(graph, state.u_tilde, state.lap_out);
  counters.comm_rounds += 1;
  for (std::size_t idx = 0; idx < state.z.data.size(); ++idx) state.z.data[idx] += state.lap_out.data[idx] / q;

  // Linear term c = v_k + A^T z (second communication round; A symmetric).
  apply_constraint(graph, state.z, state.lap_out);
  counters.comm_rounds += 1;
  for (std::size_t idx = 0; idx < state.c_lin.data.size(); ++idx)
    state.c_lin.data[idx] = state.v.data[idx] + state.lap_out.data[idx];

  const LoDecision lo = lo_tolerance(policy, sched, k, t, policy.epsilon, diameter(set));

  auto solve_node = [&](int i) {
    Subproblem sub = reduce_subproblem(state.c_lin.row(i), state.x_inner_prev.row(i), state.x_prev.row(i), sched.mu,
                                       eta, p_k);
    double gap;
    bool capped;
    cgs_solve_into(set, sub.g, sub.u, sub.beta, lo.tol, lo.cap, state.x_inner_next.row(i), state.node_lo[i], gap,
                   capped);
    state.node_cap[i] = capped ? 1 : 0;
  };
  if (pool)
    pool->parallel_for(0, m, solve_node);
  else
    for (int i = 0; i < m; ++i) solve_node(i);

  for (int i = 0; i < m; ++i) {  // fixed-order reduction
    counters.lo_calls += state.node_lo[i];
    state.cgs_cap_hits += state.node_cap[i];
  }

  if (t == sched.T[k] - 1) state.x_inner_secondlast = state.x_inner_next;
  std::swap(state.x_inner_prevprev, state.x_inner_prev);
  std::swap(state.x_inner_prev, state.x_inner_next);
}

RunResult run_ipds(const ProblemSpec& problem, const Graph& graph, const ConstraintSet& set, const IpdsConfig& config,
                   const ReferenceSolution& reference) {
  if (problem.m != graph.m) throw ConfigError("run_ipds: problem and graph disagree on worker count");
  if (problem.d != set.dim) throw ConfigError("run_ipds: problem and constraint set disagree on dimension");

  const double diam = diameter(set);
  const double R = config.R > 0.0 ? config.R : diam;
  double c_const = config.c_const;
  if (c_const < 0.0) c_const = problem.sigma > 0.0 ? problem.sigma * problem.sigma / (R * R) : 0.0;
  const double L = smoothness_estimate(problem);
  const Schedule sched = make_schedule(L, problem.mu, operator_norm(graph), config.N, R, c_const);

  ThreadPool pool(std::max(1, config.threads));
  ThreadPool* pool_ptr = config.threads > 1 ? &pool : nullptr;

  // Default start: canonical center, feasible for every set kind.
  const std::vector<double> x0_row = center(set);
  StackedPoint x0(problem.m, problem.d);
  for (int i = 0; i < problem.m; ++i) copy_to(x0_row, x0.row(i));

  IpdsState state;
  init_state(state, x0, problem.m, problem.d);
  OracleCounters counters;
  RunResult result;
  StackedPoint x_bar(problem.m, problem.d);

  const auto t_start = std::chrono::steady_clock::now();
  for (int k = 1; k <= sched.N; ++k) {
    outer_step(state, sched, k, problem, config, counters, pool_ptr);
    begin_inner_loop(state, k, config.inner_memory);

    StackedPoint x_hat_acc(problem.m, problem.d);
    for (int t = 1; t <= sched.T[k]; ++t) {
      inner_sliding_step(state, sched, k, t, graph, set, config.lo, counters, pool_ptr);
      for (std::size_t idx = 0; idx < x_hat_acc.data.size(); ++idx)
        x_hat_acc.data[idx] += state.x_inner_prev.data[idx];
      if (config.on_inner_iterate) config.on_inner_iterate(k, t, state.x_inner_prev);
    }
    const double inv_T = 1.0 / sched.T[k];
    for (double& vlt : x_hat_acc.data) vlt *= inv_T;

    // Running weighted average (the quantity the output guarantee covers).
    state.weight_total += sched.beta[k];
    for (std::size_t idx = 0; idx < state.weighted_sum.data.size(); ++idx)
      state.weighted_sum.data[idx] += sched.beta[k] * x_hat_acc.data[idx];
    for (std::size_t idx = 0; idx < x_bar.data.size(); ++idx)
      x_bar.data[idx] = state.weighted_sum.data[idx] / state.weight_total;

    std::swap(state.x_prevprev, state.x_prev);
    state.x_prev = state.x_inner_prev;
    state.x_hat_prev = std::move(x_hat_acc);

    if (!all_finite(x_bar) || !all_finite(state.z) || !all_finite(state.v))
      throw NumericsError("run_ipds: non-finite iterate at outer iteration " + std::to_string(k));

    RunRow row;
    row.k = k;
    row.f_gap = objective_value(problem, x_bar) - reference.f;
    row.consensus_gap = consensus_gap(graph, x_bar);
    if (!std::isfinite(row.f_gap) || !std::isfinite(row.consensus_gap))
      throw NumericsError("run_ipds: non-finite metrics at outer iteration " + std::to_string(k));
    row.samples = counters.samples;
    row.lo_calls = counters.lo_calls;
    row.comm_rounds = counters.comm_rounds;
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() -
                                                                              t_start)
            .count();
    result.record.rows.push_back(row);
  }

  result.x = x_bar;
  result.counters = counters;
  result.cgs_cap_hits = state.cgs_cap_hits;
  return result;
}

}  // namespace ipds
