#include "ipds/cgs.hpp"

#include <algorithm>
#include <cmath>

#include "ipds/errors.hpp"
#include "ipds/stacked.hpp"

namespace ipds {

namespace {

double phi_value(std::span<const double> g, std::span<const double> u, double beta, std::span<const double> x) {
  return dot(g, x) + 0.5 * beta * sqdist(x, u);
}

}  // namespace

WolfeGapResult wolfe_gap(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                         std::span<const double> u_t) {
  if (!(beta > 0.0)) throw ConfigError("wolfe_gap: beta must be > 0");
  const int d = set.dim;
  std::vector<double> grad(d);
  for (int i = 0; i < d; ++i) grad[i] = g[i] + beta * (u_t[i] - u[i]);
  WolfeGapResult r;
  r.direction = lo_oracle(set, grad);
  double gap = 0.0;
  for (int i = 0; i < d; ++i) gap += grad[i] * (u_t[i] - r.direction[i]);
  r.gap = gap;
  return r;
}

void cgs_solve_into(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                    double tol, std::uint64_t max_iter, std::span<double> out, std::uint64_t& lo_calls,
                    double& final_gap, bool& hit_cap) {
  if (!(beta > 0.0)) throw ConfigError("cgs_solve: beta must be > 0");
  if (max_iter < 1) throw ConfigError("cgs_solve: max_iter must be >= 1");
  const int d = set.dim;

  // Warm start at u; fall back to a vertex when u is infeasible.
  if (contains(set, u, 1e-9))
    copy_to(u, out);
  else
    lo_oracle(set, g, out);

  std::vector<double> grad(d), v(d);
  lo_calls = 0;
  hit_cap = false;
  std::uint64_t steps = 0;
  for (;;) {
    for (int i = 0; i < d; ++i) grad[i] = g[i] + beta * (out[i] - u[i]);
    lo_oracle(set, grad, v);
    ++lo_calls;
    double gap = 0.0;
    for (int i = 0; i < d; ++i) gap += grad[i] * (out[i] - v[i]);
    final_gap = gap;
    if (gap <= tol) return;
    if (steps >= max_iter) {
      hit_cap = true;
      return;
    }
    double denom = 0.0;
    for (int i = 0; i < d; ++i) {
      double dv = v[i] - out[i];
      denom += dv * dv;
    }
    denom *= beta;
    if (denom <= 0.0) return;  // v == u_t: gap is 0 by construction
    // <beta(u - u_t) - g, v - u_t> equals the gap, so the exact line search
    // step is gap/denom clipped at 1.
    double alpha = std::min(1.0, gap / denom);
    for (int i = 0; i < d; ++i) out[i] += alpha * (v[i] - out[i]);
    ++steps;
  }
}

CgsResult cgs_solve(const ConstraintSet& set, std::span<const double> g, std::span<const double> u, double beta,
                    double tol, std::uint64_t max_iter, CgsTrace* trace) {
  CgsResult res;
  res.point.resize(set.dim);
  if (!trace) {
    cgs_solve_into(set, g, u, beta, tol, max_iter, res.point, res.lo_calls, res.final_gap, res.hit_cap);
    return res;
  }

  // Traced variant mirrors cgs_solve_into step by step.
  const int d = set.dim;
  std::span<double> out(res.point);
  if (contains(set, u, 1e-9))
    copy_to(u, out);
  else
    lo_oracle(set, g, out);
  std::vector<double> grad(d), v(d);
  std::uint64_t steps = 0;
  for (;;) {
    trace->phi.push_back(phi_value(g, u, beta, out));
    trace->iterates.emplace_back(out.begin(), out.end());
    for (int i = 0; i < d; ++i) grad[i] = g[i] + beta * (out[i] - u[i]);
    lo_oracle(set, grad, v);
    ++res.lo_calls;
    double gap = 0.0;
    for (int i = 0; i < d; ++i) gap += grad[i] * (out[i] - v[i]);
    res.final_gap = gap;
    if (gap <= tol) return res;
    if (steps >= max_iter) {
      res.hit_cap = true;
      return res;
    }
    double denom = 0.0;
    for (int i = 0; i < d; ++i) {
      double dv = v[i] - out[i];
      denom += dv * dv;
    }
    denom *= beta;
    if (denom <= 0.0) return res;
    double alpha = std::min(1.0, gap / denom);
    for (int i = 0; i < d; ++i) out[i] += alpha * (v[i] - out[i]);
    ++steps;
  }
}

Subproblem reduce_subproblem(std::span<const double> c, std::span<const double> x_prev,
                             std::span<const double> x_anchor, double mu, double eta, double p) {
  if (mu < 0.0 || eta < 0.0 || !(p > 0.0)) throw ConfigError("reduce_subproblem: need mu >= 0, eta >= 0, p > 0");
  double beta = mu + eta + p;
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("reduce_subproblem: beta must be positive and finite");
  Subproblem s;
  s.beta = beta;
  s.g.assign(c.begin(), c.end());
  s.u.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) s.u[i] = (eta * x_prev[i] + p * x_anchor[i]) / beta;
  return s;
}

}  // namespace ipds
