#include "ipds/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ipds/errors.hpp"
#include "ipds/rng.hpp"

namespace ipds {

ObjectiveKind objective_from_string(const std::string& s) {
  if (s == "logistic") return ObjectiveKind::logistic;
  if (s == "quadratic") return ObjectiveKind::quadratic;
  throw ConfigError("unknown objective kind: " + s);
}

std::string to_string(ObjectiveKind k) {
  return k == ObjectiveKind::logistic ? "logistic" : "quadratic";
}

namespace {

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// 1 / (1 + exp(-z))
double sigmoid(double z) {
  if (z >= 0.0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::vector<std::vector<int>> partition_dataset(const Dataset& data, int m, std::uint64_t seed) {
  if (data.n < m) throw ConfigError("partition_dataset: fewer samples than workers");
  std::vector<int> idx(data.n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = Rng::keyed(seed, 0x706172ull, 0);  // partition stream
  for (int j = data.n - 1; j > 0; --j) {
    int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    std::swap(idx[j], idx[k]);
  }
  std::vector<std::vector<int>> shards(m);
  int base = data.n / m, extra = data.n % m;
  int pos = 0;
  for (int i = 0; i < m; ++i) {
    int size = base + (i < extra ? 1 : 0);
    shards[i].assign(idx.begin() + pos, idx.begin() + pos + size);
    pos += size;
  }
  return shards;
}

ProblemSpec make_problem(ObjectiveKind kind, Dataset data, int m, double mu, double sigma, std::uint64_t seed) {
  if (m < 1) throw ConfigError("problem needs m >= 1 workers");
  if (mu < 0.0 || sigma < 0.0) throw ConfigError("mu and sigma must be >= 0");
  if (data.n < 1 || data.dim < 1) throw DataError("empty dataset");
  if (static_cast<std::size_t>(data.n) * data.dim != data.features.size() ||
      static_cast<std::size_t>(data.n) != data.labels.size())
    throw DataError("dataset shape mismatch");
  for (double v : data.features)
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  for (double v : data.labels) {
    if (!std::isfinite(v)) throw DataError("non-finite label");
    if (kind == ObjectiveKind::logistic && v != 1.0 && v != -1.0)
      throw DataError("logistic labels must be -1 or +1");
  }
  ProblemSpec p;
  p.kind = kind;
  p.m = m;
  p.d = data.dim;
  p.mu = mu;
  p.sigma = sigma;
  p.data = std::move(data);
  p.partition = partition_dataset(p.data, m, seed);
  return p;
}

double datum_loss(const ProblemSpec& p, int j, std::span<const double> x) {
  auto a = p.data.row(j);
  double s = dot(a, x);
  if (p.kind == ObjectiveKind::logistic) return log1pexp(-p.data.labels[j] * s);
  double r = s - p.data.labels[j];
  return 0.5 * r * r;
}

void datum_gradient_accumulate(const ProblemSpec& p, int j, std::span<const double> x, std::span<double> acc,
                               double weight) {
  auto a = p.data.row(j);
  double s = dot(a, x);
  double coef;
  if (p.kind == ObjectiveKind::logistic) {
    double y = p.data.labels[j];
    coef = -y * sigmoid(-y * s);
  } else {
    coef = s - p.data.labels[j];
  }
  axpy(weight * coef, a, acc);
}

void full_gradient(const ProblemSpec& p, const StackedPoint& x_hat, StackedPoint& out, OracleCounters& counters,
                   ThreadPool* pool) {
  require_shape(x_hat, p.m, p.d, "full_gradient input");
  if (!out.same_shape(x_hat)) out = StackedPoint(p.m, p.d);
  auto node = [&](int i) {
    auto g = out.row(i);
    std::fill(g.begin(), g.end(), 0.0);
    auto xi = x_hat.row(i);
    for (int j : p.partition[i]) datum_gradient_accumulate(p, j, xi, g);
  };
  if (pool)
    pool->parallel_for(0, p.m, node);
  else
    for (int i = 0; i < p.m; ++i) node(i);
  counters.samples += static_cast<std::uint64_t>(p.data.n);
}

void stochastic_gradient(const ProblemSpec& p, const StackedPoint& x_hat, int batch, std::uint64_t seed, int outer_k,
                         StackedPoint& out, OracleCounters& counters, ThreadPool* pool, SampleMode mode) {
  require_shape(x_hat, p.m, p.d, "stochastic_gradient input");
  if (batch < 1) throw ConfigError("stochastic_gradient: batch must be >= 1");
  if (!out.same_shape(x_hat)) out = StackedPoint(p.m, p.d);
  for (int i = 0; i < p.m; ++i)
    if (p.partition[i].empty()) throw ConfigError("stochastic_gradient: empty shard at node " + std::to_string(i));
  if (mode == SampleMode::exhaustive)
    for (int i = 0; i < p.m; ++i)
      if (static_cast<int>(p.partition[i].size()) != batch)
        throw ConfigError("stochastic_gradient: exhaustive mode needs batch == shard size");

  auto node = [&](int i) {
    auto g = out.row(i);
    std::fill(g.begin(), g.end(), 0.0);
    auto xi = x_hat.row(i);
    const auto& shard = p.partition[i];
    const double scale = static_cast<double>(shard.size()) / batch;  // unbiased for the shard sum
    if (mode == SampleMode::exhaustive) {
      for (int j : shard) datum_gradient_accumulate(p, j, xi, g, scale);
    } else {
      Rng rng = Rng::keyed(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(outer_k));
      for (int b = 0; b < batch; ++b) {
        int j = shard[rng.below(shard.size())];
        datum_gradient_accumulate(p, j, xi, g, scale);
      }
    }
  };
  if (pool)
    pool->parallel_for(0, p.m, node);
  else
    for (int i = 0; i < p.m; ++i) node(i);
  counters.samples += static_cast<std::uint64_t>(p.m) * static_cast<std::uint64_t>(batch);
}

double objective_value(const ProblemSpec& p, const StackedPoint& x) {
  require_shape(x, p.m, p.d, "objective_value input");
  double total = 0.0;
  for (int i = 0; i < p.m; ++i) {
    auto xi = x.row(i);
    for (int j : p.partition[i]) total += datum_loss(p, j, xi);
    if (p.mu > 0.0) total += 0.5 * p.mu * dot(xi, xi);
  }
  return total;
}

double objective_value_consensus(const ProblemSpec& p, std::span<const double> x) {
  double total = 0.0;
  for (int j = 0; j < p.data.n; ++j) total += datum_loss(p, j, x);
  if (p.mu > 0.0) total += 0.5 * p.m * p.mu * dot(x, x);
  return total;
}

void consensus_gradient(const ProblemSpec& p, std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j < p.data.n; ++j) datum_gradient_accumulate(p, j, x, out);
  if (p.mu > 0.0) axpy(p.m * p.mu, x, out);
}

namespace {

// Certified-from-above top eigenvalue of sum_j a_j a_j^T over the given rows,
// by power iteration with a residual stopping bound.
double gram_top_eigenvalue(const ProblemSpec& p, const std::vector<int>& rows) {
  const int d = p.d;
  double trace = 0.0;
  for (int j : rows) {
    auto a = p.data.row(j);
    trace += dot(a, a);
  }
  if (trace == 0.0) return 0.0;
  std::vector<double> v(d), w(d);
  Rng rng(0x9a11ull);
  for (double& vi : v) vi = rng.uniform01() - 0.5;
  double n = nrm2(v);
  for (double& vi : v) vi /= n;
  double theta = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(w.begin(), w.end(), 0.0);
    for (int j : rows) {
      auto a = p.data.row(j);
      axpy(dot(a, v), a, w);
    }
    theta = dot(v, w);
    double res2 = 0.0;
    for (int i = 0; i < d; ++i) {
      double r = w[i] - theta * v[i];
      res2 += r * r;
    }
    if (std::sqrt(res2) <= 1e-12 * trace) break;
    double wn = nrm2(w);
    if (wn == 0.0) return 0.0;
    for (int i = 0; i < d; ++i) v[i] = w[i] / wn;
  }
  return std::min(theta + 2e-12 * trace, trace);  // residual bound keeps this >= lambda_max
}

}  // namespace

double smoothness_estimate(const ProblemSpec& p) {
  if (p.exact_smoothness > 0.0) return p.exact_smoothness;
  double worst = 0.0;
  for (int i = 0; i < p.m; ++i) {
    double li;
    if (p.kind == ObjectiveKind::logistic) {
      double s = 0.0;
      for (int j : p.partition[i]) {
        auto a = p.data.row(j);
        s += dot(a, a);
      }
      li = 0.25 * s;
    } else {
      li = gram_top_eigenvalue(p, p.partition[i]);
    }
    worst = std::max(worst, li);
  }
  return worst;
}

ReferenceSolution reference_optimum(const ProblemSpec& p, const ConstraintSet& set, double tol) {
  if (!(tol > 0.0)) throw ConfigError("reference_optimum: tol must be > 0");
  const int d = p.d;
  // Smoothness of the whole consensus objective.
  std::vector<int> all(p.data.n);
  std::iota(all.begin(), all.end(), 0);
  double lips;
  if (p.kind == ObjectiveKind::logistic) {
    double s = 0.0;
    for (int j = 0; j < p.data.n; ++j) {
      auto a = p.data.row(j);
      s += dot(a, a);
    }
    lips = 0.25 * s;
  } else {
    lips = gram_top_eigenvalue(p, all);
  }
  lips += p.m * p.mu;
  if (lips <= 0.0) lips = 1.0;
  const double step = 1.0 / lips;

  std::vector<double> x = center(set);
  std::vector<double> y = x, grad(d), cand(d), vertex(d);
  double t_momentum = 1.0;
  double best_gap = HUGE_VAL;
  std::vector<double> best_x = x;
  double f_prev = objective_value_consensus(p, x);

  const long cap = 1000000;
  for (long it = 0; it < cap; ++it) {
    consensus_gradient(p, y, grad);
    for (int i = 0; i < d; ++i) cand[i] = y[i] - step * grad[i];
    std::vector<double> x_new = project(set, cand);

    // Duality certificate at the projected iterate.
    consensus_gradient(p, x_new, grad);
    lo_oracle(set, grad, vertex);
    double gap = 0.0;
    for (int i = 0; i < d; ++i) gap += grad[i] * (x_new[i] - vertex[i]);
    if (gap < best_gap) {
      best_gap = gap;
      best_x = x_new;
    }
    if (gap <= tol) {
      double f = objective_value_consensus(p, x_new);
      return {x_new, f};
    }

    double f_new = objective_value_consensus(p, x_new);
    if (f_new > f_prev) {  // function restart
      t_momentum = 1.0;
      y = x_new;
    } else {
      double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
      double coef = (t_momentum - 1.0) / t_next;
      for (int i = 0; i < d; ++i) y[i] = x_new[i] + coef * (x_new[i] - x[i]);
      t_momentum = t_next;
    }
    f_prev = f_new;
    x = x_new;
  }
  throw ConvergenceError("reference_optimum: iteration cap reached before tolerance (best gap " +
                             std::to_string(best_gap) + ")",
                         best_x, objective_value_consensus(p, best_x));
}

}  // namespace ipds
