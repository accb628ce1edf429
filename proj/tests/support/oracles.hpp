#pragma once

// Test-only oracles, independent of the library implementation paths they
// check. Eigendecompositions go through Eigen; everything else is brute
// force.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ipds/graph.hpp"
#include "ipds/stacked.hpp"

namespace oracle {

// All eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> sym_eigenvalues(const std::vector<double>& a, int n) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = a[static_cast<std::size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return ev;
}

// Dense (L kron I_d) times vec(x), materialized.
inline ipds::StackedPoint kron_multiply(const ipds::Graph& g, const ipds::StackedPoint& x) {
  const int m = g.m, d = x.cols;
  const int n = m * d;
  std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double lij = g.lap(i, j);
      if (lij == 0.0) continue;
      for (int c = 0; c < d; ++c) A[static_cast<std::size_t>(i * d + c) * n + (j * d + c)] = lij;
    }
  ipds::StackedPoint out(m, d);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int ccol = 0; ccol < n; ++ccol) acc += A[static_cast<std::size_t>(r) * n + ccol] * x.data[ccol];
    out.data[r] = acc;
  }
  return out;
}

// argmin <g, x> by enumeration over the 2d vertices of the l1 ball.
inline std::vector<double> l1_lo_bruteforce(std::span<const double> g, double r) {
  const int d = static_cast<int>(g.size());
  double best = HUGE_VAL;
  std::vector<double> arg(d, 0.0);
  for (int j = 0; j < d; ++j)
    for (double sgn : {1.0, -1.0}) {
      double val = sgn * r * g[j];
      if (val < best) {
        best = val;
        std::fill(arg.begin(), arg.end(), 0.0);
        arg[j] = sgn * r;
      }
    }
  return arg;
}

// Euclidean projection onto { x >= 0, sum x = r } by enumeration over
// support patterns (exact for small d).
inline std::vector<double> simplex_project_bruteforce(std::span<const double> y, double r) {
  const int d = static_cast<int>(y.size());
  double best = HUGE_VAL;
  std::vector<double> arg(d, 0.0);
  for (int mask = 1; mask < (1 << d); ++mask) {
    int k = __builtin_popcount(static_cast<unsigned>(mask));
    double sum = 0.0;
    for (int i = 0; i < d; ++i)
      if (mask & (1 << i)) sum += y[i];
    double shift = (sum - r) / k;
    std::vector<double> cand(d, 0.0);
    bool ok = true;
    for (int i = 0; i < d; ++i)
      if (mask & (1 << i)) {
        cand[i] = y[i] - shift;
        if (cand[i] < -1e-12) ok = false;
      }
    if (!ok) continue;
    double dist = 0.0;
    for (int i = 0; i < d; ++i) {
      double diff = cand[i] - y[i];
      dist += diff * diff;
    }
    if (dist < best) {
      best = dist;
      arg = cand;
    }
  }
  return arg;
}

// l1-ball projection via bisection on the soft-threshold parameter.
inline std::vector<double> l1_project_bisection(std::span<const double> y, double r) {
  const int d = static_cast<int>(y.size());
  double l1 = 0.0, top = 0.0;
  for (double v : y) {
    l1 += std::abs(v);
    top = std::max(top, std::abs(v));
  }
  std::vector<double> out(y.begin(), y.end());
  if (l1 <= r) return out;
  double lo = 0.0, hi = top;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double v : y) s += std::max(std::abs(v) - mid, 0.0);
    if (s > r)
      lo = mid;
    else
      hi = mid;
  }
  double theta = 0.5 * (lo + hi);
  for (int i = 0; i < d; ++i) out[i] = std::copysign(std::max(std::abs(y[i]) - theta, 0.0), y[i]);
  return out;
}

// Central finite difference of a scalar function along direction u.
inline double directional_derivative(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, std::span<const double> u, double h) {
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] += h * u[i];
    minus[i] -= h * u[i];
  }
  return (f(plus) - f(minus)) / (2.0 * h);
}

// Dense symmetric solve by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[static_cast<std::size_t>(row) * n + col]) > std::abs(a[static_cast<std::size_t>(piv) * n + col]))
        piv = row;
    for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(col) * n + j], a[static_cast<std::size_t>(piv) * n + j]);
    std::swap(b[col], b[piv]);
    double diag = a[static_cast<std::size_t>(col) * n + col];
    for (int row = col + 1; row < n; ++row) {
      double factor = a[static_cast<std::size_t>(row) * n + col] / diag;
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j)
        a[static_cast<std::size_t>(row) * n + j] -= factor * a[static_cast<std::size_t>(col) * n + j];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double acc = b[row];
    for (int j = row + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(row) * n + j] * x[j];
    x[row] = acc / a[static_cast<std::size_t>(row) * n + row];
  }
  return x;
}

}  // namespace oracle
