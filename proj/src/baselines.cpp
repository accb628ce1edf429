#include "ipds/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ipds/errors.hpp"

namespace ipds {

void GossipMatrix::mix(const StackedPoint& x, StackedPoint& out) const {
  if (x.rows != m) throw DimensionError("GossipMatrix::mix: row mismatch");
  if (!out.same_shape(x)) out = StackedPoint(x.rows, x.cols);
  const int d = x.cols;
  for (int i = 0; i < m; ++i) {
    auto yi = out.row(i);
    std::fill(yi.begin(), yi.end(), 0.0);
    for (int j = 0; j < m; ++j) {
      double wij = at(i, j);
      if (wij == 0.0) continue;
      auto xj = x.row(j);
      for (int c = 0; c < d; ++c) yi[c] += wij * xj[c];
    }
  }
}

GossipMatrix metropolis_weights(const Graph& g) {
  if (!is_connected(g)) throw ConfigError("metropolis_weights requires a connected graph");
  GossipMatrix W;
  W.m = g.m;
  W.w.assign(static_cast<std::size_t>(g.m) * g.m, 0.0);
  auto deg = [&](int i) { return static_cast<double>(g.neighbors[i].size()); };
  for (auto [i, j] : g.edges) {
    double wij = 1.0 / (1.0 + std::max(deg(i), deg(j)));
    W.w[static_cast<std::size_t>(i) * g.m + j] = wij;
    W.w[static_cast<std::size_t>(j) * g.m + i] = wij;
  }
  for (int i = 0; i < g.m; ++i) {
    double off = 0.0;
    for (int j = 0; j < g.m; ++j)
      if (j != i) off += W.w[static_cast<std::size_t>(i) * g.m + j];
    W.w[static_cast<std::size_t>(i) * g.m + i] = 1.0 - off;
  }
  return W;
}

namespace {

// grad f_i (including the mu term) of node i's shard at x_i, for all i.
void node_gradients(const ProblemSpec& p, const StackedPoint& x, StackedPoint& out, ThreadPool* pool) {
  auto node = [&](int i) {
    auto g = out.row(i);
    std::fill(g.begin(), g.end(), 0.0);
    auto xi = x.row(i);
    for (int j : p.partition[i]) datum_gradient_accumulate(p, j, xi, g);
    if (p.mu > 0.0) axpy(p.mu, xi, g);
  };
  if (pool)
    pool->parallel_for(0, p.m, node);
  else
    for (int i = 0; i < p.m; ++i) node(i);
}

}  // namespace

RunResult run_defw(const ProblemSpec& problem, const Graph& graph, const ConstraintSet& set, int iters,
                   const ReferenceSolution& reference, ThreadPool* pool, const DefwObserver& observer) {
  if (problem.m != graph.m) throw ConfigError("run_defw: problem and graph disagree on worker count");
  if (iters < 1) throw ConfigError("run_defw: iters must be >= 1");
  const int m = problem.m, d = problem.d;

  GossipMatrix W = metropolis_weights(graph);
  const std::vector<double> start = center(set);
  StackedPoint x(m, d);
  for (int i = 0; i < m; ++i) copy_to(start, x.row(i));

  StackedPoint x_bar(m, d), g_track(m, d), g_mixed(m, d), grad_now(m, d), grad_prev(m, d);
  std::vector<double> vertex(d);
  OracleCounters counters;
  RunResult result;

  const auto t_start = std::chrono::steady_clock::now();
  for (int t = 1; t <= iters; ++t) {
    // (1) consensus on the iterates
    W.mix(x, x_bar);
    counters.comm_rounds += 1;

    // (2) gradient tracking; each node touches its full shard once
    node_gradients(problem, x_bar, grad_now, pool);
    counters.samples += static_cast<std::uint64_t>(problem.data.n);
    if (t == 1) {
      g_track = grad_now;
    } else {
      W.mix(g_track, g_mixed);
      counters.comm_rounds += 1;
      for (std::size_t idx = 0; idx < g_track.data.size(); ++idx)
        g_track.data[idx] = g_mixed.data[idx] + grad_now.data[idx] - grad_prev.data[idx];
    }
    grad_prev = grad_now;

    // (3) Frank-Wolfe step from the averaged point
    const double gamma = problem.mu > 0.0 ? std::min(1.0, 2.0 / (t + 1.0)) : 2.0 / (t + 2.0);
    for (int i = 0; i < m; ++i) {
      lo_oracle(set, g_track.row(i), vertex);
      auto xi = x.row(i);
      auto bi = x_bar.row(i);
      for (int c = 0; c < d; ++c) xi[c] = bi[c] + gamma * (vertex[c] - bi[c]);
    }

    RunRow row;
    row.k = t;
    row.f_gap = objective_value(problem, x) - reference.f;
    row.consensus_gap = consensus_gap(graph, x);
    row.samples = counters.samples;
    row.lo_calls = counters.lo_calls;
    row.comm_rounds = counters.comm_rounds;
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() -
                                                                              t_start)
            .count();
    result.record.rows.push_back(row);
  }

  result.x = x;
  result.counters = counters;
  return result;
}

RunResult run_projected_gradient(const ProblemSpec& problem, const ConstraintSet& set, int iters, double step,
                                 const ReferenceSolution& reference) {
  if (iters < 1) throw ConfigError("run_projected_gradient: iters must be >= 1");
  const int d = problem.d;

  if (step < 0.0) {
    // 1/L default from the consensus objective smoothness.
    double lips = 0.0;
    if (problem.kind == ObjectiveKind::logistic) {
      double s = 0.0;
      for (int j = 0; j < problem.data.n; ++j) {
        auto a = problem.data.row(j);
        s += dot(a, a);
      }
      lips = 0.25 * s;
    } else {
      // Trace bound; always >= lambda_max.
      for (int j = 0; j < problem.data.n; ++j) {
        auto a = problem.data.row(j);
        lips += dot(a, a);
      }
    }
    lips += problem.m * problem.mu;
    step = lips > 0.0 ? 1.0 / lips : 1.0;
  }

  std::vector<double> x = center(set), grad(d), cand(d);
  OracleCounters counters;
  RunResult result;
  double f_prev = objective_value_consensus(problem, x);
  int increases = 0;

  const auto t_start = std::chrono::steady_clock::now();
  for (int t = 1; t <= iters; ++t) {
    consensus_gradient(problem, x, grad);
    counters.samples += static_cast<std::uint64_t>(problem.data.n);
    for (int i = 0; i < d; ++i) cand[i] = x[i] - step * grad[i];
    std::vector<double> x_new = project(set, cand);
    double f_new = objective_value_consensus(problem, x_new);
    if (f_new > f_prev) {
      if (++increases >= 10)
        throw StepSizeError("run_projected_gradient: objective increased 10 consecutive iterations");
    } else {
      increases = 0;
    }
    x = std::move(x_new);
    f_prev = f_new;

    RunRow row;
    row.k = t;
    row.f_gap = f_new - reference.f;
    row.consensus_gap = 0.0;  // single consensus variable
    row.samples = counters.samples;
    row.lo_calls = counters.lo_calls;
    row.comm_rounds = counters.comm_rounds;
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() -
                                                                              t_start)
            .count();
    result.record.rows.push_back(row);
  }

  result.x = StackedPoint(1, d);
  copy_to(x, result.x.row(0));
  result.counters = counters;
  return result;
}

}  // namespace ipds
